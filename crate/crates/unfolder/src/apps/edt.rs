//! Execution dependence trees built by replaying the trace of a goal.

use serde::Serialize;

use crate::engine::{effective_mode, run_observed, unfold_expr, Config, Interpretation};
use crate::error::{Error, Result};
use crate::exec::{normalize, ueval, RuleBase, Strategy};
use crate::fact::Fact;
use crate::predef::{eval, match_all, EvalOpts, MatchOutcome};
use crate::syntax::{Expr, Program};
use crate::trace::{Part, StepRule, Trace, GOAL};

/// Fuel for computing node values.
const VALUE_FUEL: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdtNode {
    pub id: usize,
    /// The instantiated call this node stands for.
    pub call: Expr,
    /// Its computed result; ⊥ marks parts left unevaluated.
    pub value: Expr,
    pub rule: String,
    pub children: Vec<usize>,
}

/// Tree of rule applications; node 0 is the root and ids are indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edt {
    pub nodes: Vec<EdtNode>,
}

impl Edt {
    pub fn root(&self) -> &EdtNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> Option<&EdtNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.nodes.iter().find(|n| n.children.contains(&id)).map(|n| n.id)
    }

    /// Indented `call = value <rule>` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_node(0, 0, &mut out);
        out
    }

    fn render_node(&self, id: usize, depth: usize, out: &mut String) {
        let n = &self.nodes[id];
        let tag = if id == 0 { "root".to_string() } else { format!("n{id}") };
        out.push_str(&format!("{}{tag}: {} = {} <{}>\n", "  ".repeat(depth), n.call, n.value, n.rule));
        for &c in &n.children {
            self.render_node(c, depth + 1, out);
        }
    }
}

/// Predefined functions evaluated everywhere, including inside call arguments.
fn deep_eval(e: &Expr) -> Expr {
    let opts = EvalOpts::default();
    match e {
        Expr::Fun(f, n, args) => Expr::Fun(f.clone(), *n, args.iter().map(deep_eval).collect()),
        _ if e.children().is_empty() => e.clone(),
        _ => {
            let mut c = e.clone();
            for x in c.children_mut() {
                *x = deep_eval(x);
            }
            eval(&c, opts)
        }
    }
}

/// First ground fact for the goal that is free of ⊥, with the interpretation it came from.
/// The sequence is only computed as far as needed.
fn defined_goal(p: &Program, goal: &Expr, max_steps: usize, cfg: &Config) -> Result<(Fact, Interpretation)> {
    let cfg = &cfg.for_program(p);
    let defined = |interp: &Interpretation| {
        let facts = unfold_expr(GOAL, goal, &interp.sources(), cfg);
        facts.into_iter().find(|f| f.guard.is_true() && f.is_bot_free() && !f.traces.is_empty()).map(|f| (f, interp.clone()))
    };
    let mut found = defined(&Interpretation::empty());
    if found.is_none() {
        run_observed(p, max_steps, cfg, effective_mode(p, cfg), |i| {
            found = defined(i);
            found.is_none()
        });
    }
    found.ok_or(Error::GoalUndefined(max_steps))
}

struct Builder<'a> {
    base: RuleBase,
    p: &'a Program,
    facts: Vec<Fact>,
    nodes: Vec<EdtNode>,
    /// Position of each node in the replayed expression.
    paths: Vec<Vec<usize>>,
}

impl Builder<'_> {
    fn value_of(&self, call: &Expr) -> Expr {
        let r = ueval(&self.facts, call, VALUE_FUEL);
        match r.best() {
            Some(v) if !v.contains_bot() || r.values.len() == 1 => v.clone(),
            _ => normalize(&self.base, call, Strategy::Outermost, VALUE_FUEL).map(|(v, _)| v).unwrap_or(Expr::Bot),
        }
    }

    fn add(&mut self, call: Expr, rule: &str, path: Vec<usize>) -> usize {
        let id = self.nodes.len();
        let parent = (0..id).rev().find(|&i| path.starts_with(&self.paths[i]));
        let value = self.value_of(&call);
        self.nodes.push(EdtNode { id, call, value, rule: rule.to_string(), children: Vec::new() });
        self.paths.push(path);
        if let Some(pi) = parent {
            self.nodes[pi].children.push(id);
        }
        id
    }

    /// One rule application of the replay; returns the rewritten expression.
    fn apply(&self, label: &str, sub: &Expr) -> Expr {
        if let (Some(rule), Expr::Fun(_, _, args)) = (self.p.rule(label), sub) {
            if let MatchOutcome::Matched(s, _) = match_all(&rule.params, args) {
                return rule.body.subst(&s);
            }
        }
        normalize(&self.base, sub, Strategy::Outermost, VALUE_FUEL).map(|(v, _)| v).unwrap_or(Expr::Bot)
    }
}

/// Builds the tree of the rule applications that computed `goal`. Each step
/// of the goal's trace becomes a node; nesting follows position prefixes.
pub fn build_edt(p: &Program, goal: &Expr, max_steps: usize, cfg: &Config) -> Result<Edt> {
    let (fact, interp) = defined_goal(p, goal, max_steps, cfg)?;
    let trace: Trace = fact.traces[0][1..].to_vec();
    let mut b = Builder { base: RuleBase::from_program(p), p, facts: interp.facts.clone(), nodes: Vec::new(), paths: Vec::new() };
    let mut expr = deep_eval(goal);
    let goal_is_call = expr.is_full_call() && trace.first().is_some_and(|s| s.position.is_root() && matches!(s.rule, StepRule::Rule(_)));
    if !goal_is_call {
        b.nodes.push(EdtNode { id: 0, call: goal.clone(), value: fact.body.clone(), rule: GOAL.to_string(), children: Vec::new() });
        b.paths.push(Vec::new());
    }
    for step in &trace {
        // guard steps belong to rule instances that are no longer visible in the expression
        if step.position.part == Part::Guard {
            continue;
        }
        expr = deep_eval(&expr);
        let path = step.position.path.clone();
        let Some(sub) = expr.at(&path).cloned() else {
            continue;
        };
        match &step.rule {
            StepRule::Bot(_) => expr = expr.replace_at(&path, Expr::Bot),
            StepRule::Rule(label) => {
                let next = b.apply(label, &sub);
                b.add(sub, label, path.clone());
                expr = expr.replace_at(&path, next);
            }
        }
    }
    if b.nodes.is_empty() {
        b.nodes.push(EdtNode { id: 0, call: goal.clone(), value: fact.body.clone(), rule: GOAL.to_string(), children: Vec::new() });
    }
    Ok(Edt { nodes: b.nodes })
}
