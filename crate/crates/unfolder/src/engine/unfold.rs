//! Unfolding of rules against an interpretation.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::config::Config;
use super::sat::{satisfiable, Sat};
use super::umatch::umatch;
use crate::fact::{canonicalize, Fact};
use crate::predef::{eval, eval_guarded};
use crate::syntax::{Expr, Rule};
use crate::trace::{compose_position, dedup_cap, Part, Position, Step, Trace};

type Key = (Vec<Expr>, Expr, Expr);

/// A fully unfolded pseudofact with the trace suffixes leading to it.
#[derive(Clone, Debug)]
struct Leaf {
    params: Vec<Expr>,
    guard: Expr,
    body: Expr,
    suffixes: Vec<Trace>,
}

struct Unfolder<'a> {
    index: HashMap<&'a str, Vec<&'a Fact>>,
    cfg: &'a Config,
    memo: HashMap<Key, Rc<Vec<Leaf>>>,
    counter: usize,
}

fn call_sites(guard: &Expr, body: &Expr) -> Vec<Position> {
    let g = guard.call_positions().into_iter().map(|path| Position { part: Part::Guard, path });
    let b = body.call_positions().into_iter().map(Position::body);
    g.chain(b).collect()
}

fn side<'e>(pos: &Position, guard: &'e Expr, body: &'e Expr) -> &'e Expr {
    match pos.part {
        Part::Guard => guard,
        Part::Body => body,
    }
}

impl<'a> Unfolder<'a> {
    fn new(sources: &'a [Fact], cfg: &'a Config) -> Self {
        let mut index: HashMap<&str, Vec<&Fact>> = HashMap::new();
        for f in sources {
            index.entry(f.name.as_str()).or_default().push(f);
        }
        Unfolder { index, cfg, memo: HashMap::new(), counter: 0 }
    }

    fn alive(&self, guard: &Expr) -> bool {
        !(guard.is_false() || guard.is_bot()) && satisfiable(guard, self.cfg) != Sat::No
    }

    /// Evaluates, canonicalizes and recursively unfolds a pseudofact.
    fn settle(&mut self, params: Vec<Expr>, guard: Expr, body: Expr, depth: usize) -> Option<Rc<Vec<Leaf>>> {
        let (guard, body) = eval_guarded(&guard, &body, self.cfg.eval_opts());
        if !self.alive(&guard) {
            return None;
        }
        let (params, guard, body) = canonicalize(&params, &guard, &body);
        Some(self.unfold(params, guard, body, depth))
    }

    fn unfold(&mut self, params: Vec<Expr>, guard: Expr, body: Expr, depth: usize) -> Rc<Vec<Leaf>> {
        let key = (params, guard, body);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (params, guard, body) = key.clone();
        let sites = call_sites(&guard, &body);
        let leaves = if sites.is_empty() {
            vec![Leaf { params, guard, body, suffixes: vec![Vec::new()] }]
        } else if depth >= self.cfg.max_depth {
            self.give_up(params, guard, body, &sites)
        } else {
            let mut out = Vec::new();
            for o in &sites {
                out.extend(self.unfold_at(&params, &guard, &body, o, depth));
            }
            out
        };
        let merged = Rc::new(merge_leaves(leaves, self.cfg.trace_cap));
        self.memo.insert(key, merged.clone());
        merged
    }

    /// Replaces every outermost call by ⊥ once the depth bound is hit.
    fn give_up(&mut self, params: Vec<Expr>, mut guard: Expr, mut body: Expr, sites: &[Position]) -> Vec<Leaf> {
        let mut steps = Vec::new();
        let mut done: Vec<&Position> = Vec::new();
        for o in sites {
            if done.iter().any(|d| d.is_prefix_of(o)) {
                continue;
            }
            let fname = match side(o, &guard, &body).at(&o.path) {
                Some(Expr::Fun(f, _, _)) => f.clone(),
                _ => continue,
            };
            steps.push(Step::bot(&fname, o.clone()));
            match o.part {
                Part::Guard => guard = guard.replace_at(&o.path, Expr::Bot),
                Part::Body => body = body.replace_at(&o.path, Expr::Bot),
            }
            done.push(o);
        }
        let (guard, body) = eval_guarded(&guard, &body, self.cfg.eval_opts());
        if !self.alive(&guard) {
            return Vec::new();
        }
        let (params, guard, body) = canonicalize(&params, &guard, &body);
        vec![Leaf { params, guard, body, suffixes: vec![steps] }]
    }

    fn unfold_at(&mut self, params: &[Expr], guard: &Expr, body: &Expr, o: &Position, depth: usize) -> Vec<Leaf> {
        let Some(Expr::Fun(f, _, args)) = side(o, guard, body).at(&o.path).cloned() else {
            return Vec::new();
        };
        let opts = self.cfg.eval_opts();
        let eargs: Vec<Expr> = args.iter().map(|a| eval(a, opts)).collect();
        let candidates: Vec<&Fact> = self.index.get(f.as_str()).cloned().unwrap_or_default();
        let mut out = Vec::new();
        let mut fitted = false;
        for fact in candidates {
            let fr = fact.rename_apart(&mut self.counter);
            let Some((s, cond)) = umatch(&fr.params, &eargs) else {
                continue;
            };
            if satisfiable(&cond, self.cfg) == Sat::No {
                continue;
            }
            let (g2, b2) = match o.part {
                Part::Body => (Expr::and_all(vec![guard.clone(), fr.guard.clone(), cond]), body.replace_at(&o.path, fr.body.clone())),
                Part::Guard => (Expr::and_all(vec![guard.replace_at(&o.path, fr.body.clone()), fr.guard.clone(), cond]), body.clone()),
            };
            let ps: Vec<Expr> = params.iter().map(|p| p.subst(&s)).collect();
            let Some(sub) = self.settle(ps, g2.subst(&s), b2.subst(&s), depth + 1) else {
                continue;
            };
            fitted = true;
            let heads = compose_position(o, &fr.traces);
            for leaf in sub.iter() {
                out.push(Leaf { suffixes: cross(&heads, &leaf.suffixes, self.cfg.trace_cap), ..leaf.clone() });
            }
        }
        if !fitted {
            let (g2, b2) = match o.part {
                Part::Body => (guard.clone(), body.replace_at(&o.path, Expr::Bot)),
                Part::Guard => (guard.replace_at(&o.path, Expr::Bot), body.clone()),
            };
            if let Some(sub) = self.settle(params.to_vec(), g2, b2, depth + 1) {
                let heads = vec![vec![Step::bot(&f, o.clone())]];
                for leaf in sub.iter() {
                    out.push(Leaf { suffixes: cross(&heads, &leaf.suffixes, self.cfg.trace_cap), ..leaf.clone() });
                }
            }
        }
        out
    }
}

fn cross(heads: &[Trace], tails: &[Trace], cap: usize) -> Vec<Trace> {
    let mut out = Vec::new();
    for h in heads {
        for t in tails {
            if out.len() >= cap {
                return out;
            }
            out.push(h.iter().chain(t).cloned().collect());
        }
    }
    out
}

fn merge_leaves(leaves: Vec<Leaf>, cap: usize) -> Vec<Leaf> {
    let mut order: Vec<Key> = Vec::new();
    let mut map: BTreeMap<Key, Leaf> = BTreeMap::new();
    for leaf in leaves {
        let key = (leaf.params.clone(), leaf.guard.clone(), leaf.body.clone());
        match map.get_mut(&key) {
            Some(existing) => {
                let merged = existing.suffixes.iter().cloned().chain(leaf.suffixes).collect::<Vec<_>>();
                existing.suffixes = dedup_cap(merged, cap);
            }
            None => {
                order.push(key.clone());
                map.insert(key, leaf);
            }
        }
    }
    order.into_iter().map(|k| map.remove(&k).unwrap()).collect()
}

/// Unfolds one rule against `sources` (facts and ⊥ facts of `I_n`).
pub fn unfold_rule(rule: &Rule, sources: &[Fact], cfg: &Config) -> Vec<Fact> {
    let mut u = Unfolder::new(sources, cfg);
    let Some(leaves) = u.settle(rule.params.clone(), rule.guard.clone(), rule.body.clone(), 0) else {
        return Vec::new();
    };
    leaves
        .iter()
        .map(|leaf| {
            let start = Step::rule(&rule.label, Position::root());
            let traces = leaf.suffixes.iter().map(|s| std::iter::once(start.clone()).chain(s.iter().cloned()).collect()).collect();
            Fact { name: rule.name.clone(), params: leaf.params.clone(), guard: leaf.guard.clone(), body: leaf.body.clone(), origin: rule.label.clone(), traces }
        })
        .collect()
}

/// Unfolds a single expression as the body of a nullary rule.
pub fn unfold_expr(label: &str, e: &Expr, sources: &[Fact], cfg: &Config) -> Vec<Fact> {
    let rule = Rule { label: label.to_string(), name: label.to_string(), params: Vec::new(), guard: Expr::tt(), body: e.clone() };
    unfold_rule(&rule, sources, cfg)
}
