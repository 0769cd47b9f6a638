//! Position-based rewriting with program rules (small-step semantics) or
//! with the facts of an interpretation (`ueval`).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::fact::Fact;
use crate::predef::{match_all, reduce_prim, EvalOpts, MatchOutcome};
use crate::syntax::{Expr, Prim, Program, Rule};

#[derive(Clone, Debug)]
pub struct Clause {
    pub label: String,
    pub params: Vec<Expr>,
    pub guard: Expr,
    pub body: Expr,
}

/// Clauses indexed by function name.
#[derive(Clone, Debug, Default)]
pub struct RuleBase {
    clauses: HashMap<String, Vec<Clause>>,
    /// Facts keep their guard in front of the body (`c ▶ b`) so bindings made
    /// by `match` reach the body.
    guarded_result: bool,
    pub guard_fuel: usize,
}

impl RuleBase {
    fn insert(&mut self, name: &str, c: Clause) {
        self.clauses.entry(name.to_string()).or_default().push(c);
    }

    pub fn from_rules<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> Self {
        let mut b = RuleBase { guard_fuel: 1000, ..Default::default() };
        for r in rules {
            b.insert(&r.name, Clause { label: r.label.clone(), params: r.params.clone(), guard: r.guard.clone(), body: r.body.clone() });
        }
        b
    }

    pub fn from_program(p: &Program) -> Self {
        RuleBase::from_rules(&p.rules)
    }

    /// Program rules together with catamorphism rules.
    pub fn with_cata(p: &Program) -> Self {
        RuleBase::from_rules(p.rules.iter().chain(&p.cata))
    }

    pub fn from_facts<'a>(facts: impl IntoIterator<Item = &'a Fact>) -> Self {
        let mut b = RuleBase { guarded_result: true, guard_fuel: 1000, ..Default::default() };
        for f in facts {
            b.insert(&f.name, Clause { label: f.origin.clone(), params: f.params.clone(), guard: f.guard.clone(), body: f.body.clone() });
        }
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Outermost,
    Innermost,
    Random(u64),
}

/// One rewrite step: where it happened, the rule used (if any) and the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduct {
    pub position: Vec<usize>,
    pub rule: Option<String>,
    pub result: Expr,
}

fn rename_clause(c: &Clause) -> Clause {
    let mut vs = Vec::new();
    for p in &c.params {
        p.vars_into(&mut vs);
    }
    c.guard.vars_into(&mut vs);
    c.body.vars_into(&mut vs);
    let m = vs.into_iter().map(|v| (v.clone(), format!("{v}'"))).collect();
    Clause { label: c.label.clone(), params: c.params.iter().map(|p| p.rename(&m)).collect(), guard: c.guard.rename(&m), body: c.body.rename(&m) }
}

fn guard_holds(base: &RuleBase, g: &Expr) -> bool {
    if g.is_true() {
        return true;
    }
    let opts = EvalOpts { defer_comparisons: false, loose_match: true };
    normalize_with(base, g, Strategy::Outermost, base.guard_fuel, opts).is_some_and(|(v, _)| v.is_true())
}

/// Rewrites at the root of `e` only.
fn step_here(base: &RuleBase, e: &Expr, opts: EvalOpts) -> Vec<(Expr, Option<String>)> {
    match e {
        Expr::Fun(f, _, args) if e.is_full_call() => {
            let clauses = base.clauses.get(f).map(Vec::as_slice).unwrap_or(&[]);
            let symbolic = !e.is_ground();
            let mut blocked = false;
            let mut out = Vec::new();
            for c in clauses {
                let renamed;
                let c = if symbolic {
                    renamed = rename_clause(c);
                    &renamed
                } else {
                    c
                };
                match match_all(&c.params, args) {
                    MatchOutcome::Matched(s, _) => {
                        let g = c.guard.subst(&s);
                        if guard_holds(base, &g) {
                            let b = c.body.subst(&s);
                            let r = if base.guarded_result && !g.is_true() { Expr::Prim(Prim::Then, vec![g, b]) } else { b };
                            out.push((r, Some(c.label.clone())));
                        }
                    }
                    MatchOutcome::Clash => {}
                    MatchOutcome::Stuck => blocked = true,
                }
            }
            if out.is_empty() && !blocked {
                out.push((Expr::Bot, None));
            }
            out
        }
        Expr::Prim(p, args) => reduce_prim(*p, args, opts).map(|r| vec![(r, None)]).unwrap_or_default(),
        _ => Vec::new(),
    }
}

fn successors_with(base: &RuleBase, e: &Expr, opts: EvalOpts) -> Vec<Reduct> {
    let mut out = Vec::new();
    for pos in e.positions() {
        let sub = e.at(&pos).expect("position comes from the expression");
        for (r, rule) in step_here(base, sub, opts) {
            out.push(Reduct { result: e.replace_at(&pos, r), position: pos.clone(), rule });
        }
    }
    out
}

/// All one-step successors of `e`, in leftmost-outermost position order.
pub fn successors(base: &RuleBase, e: &Expr) -> Vec<Reduct> {
    successors_with(base, e, EvalOpts::default())
}

fn first_step(base: &RuleBase, e: &Expr, positions: &[Vec<usize>], opts: EvalOpts) -> Option<Expr> {
    for pos in positions {
        let sub = e.at(pos)?;
        if let Some((r, _)) = step_here(base, sub, opts).into_iter().next() {
            return Some(e.replace_at(pos, r));
        }
    }
    None
}

fn innermost_positions(e: &Expr) -> Vec<Vec<usize>> {
    let mut ps = e.positions();
    // post-order: children before parents, left to right
    ps.sort_by(|a, b| {
        let common = a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count();
        match (a.get(common), b.get(common)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    });
    ps
}

fn normalize_with(base: &RuleBase, e: &Expr, strategy: Strategy, fuel: usize, opts: EvalOpts) -> Option<(Expr, usize)> {
    let mut cur = e.clone();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(StdRng::seed_from_u64(seed)),
        _ => None,
    };
    for steps in 0..=fuel {
        let next = match strategy {
            Strategy::Outermost => first_step(base, &cur, &cur.positions(), opts),
            Strategy::Innermost => first_step(base, &cur, &innermost_positions(&cur), opts),
            Strategy::Random(_) => {
                let all = successors_with(base, &cur, opts);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.as_mut().unwrap().gen_range(0..all.len());
                    Some(all[i].result.clone())
                }
            }
        };
        match next {
            Some(n) => cur = n,
            None => return Some((cur, steps)),
        }
    }
    None
}

/// Rewrites to normal form with the given strategy; `None` when `fuel`
/// steps are not enough. Also returns the number of steps taken.
pub fn normalize(base: &RuleBase, e: &Expr, strategy: Strategy, fuel: usize) -> Option<(Expr, usize)> {
    normalize_with(base, e, strategy, fuel, EvalOpts::default())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UevalResult {
    /// Normal forms reached, sorted.
    pub values: Vec<Expr>,
    /// The exploration budget ran out before the state space was exhausted.
    pub exhausted: bool,
}

impl UevalResult {
    /// The value free of ⊥, if any, otherwise the first value.
    pub fn best(&self) -> Option<&Expr> {
        self.values.iter().find(|v| !v.contains_bot()).or(self.values.first())
    }
}

/// Set of normal forms reachable from `e` by rewriting with the facts of an
/// interpretation. Explores at most `fuel` states breadth-first.
pub fn ueval(facts: &[Fact], e: &Expr, fuel: usize) -> UevalResult {
    let base = RuleBase::from_facts(facts);
    let mut seen: HashSet<Expr> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut values = BTreeSet::new();
    seen.insert(e.clone());
    queue.push_back(e.clone());
    let mut expanded = 0;
    while let Some(cur) = queue.pop_front() {
        if expanded >= fuel {
            return UevalResult { values: values.into_iter().collect(), exhausted: true };
        }
        expanded += 1;
        let next = successors(&base, &cur);
        if next.is_empty() {
            values.insert(cur);
            continue;
        }
        for r in next {
            if seen.insert(r.result.clone()) {
                queue.push_back(r.result);
            }
        }
    }
    UevalResult { values: values.into_iter().collect(), exhausted: false }
}

/// Deterministic evaluation with facts (leftmost-outermost).
pub fn eval_with_facts(facts: &[Fact], e: &Expr, fuel: usize) -> Option<Expr> {
    normalize(&RuleBase::from_facts(facts), e, Strategy::Outermost, fuel).map(|(v, _)| v)
}
