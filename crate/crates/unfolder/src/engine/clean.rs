//! Removal or restriction of facts overlapped by more specific ones.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::config::{CleanMode, Config};
use super::order::term_lt;
use super::sat::{satisfiable_fact, Sat};
use crate::fact::Fact;
use crate::predef::eval;
use crate::syntax::unify::{instance_all, is_renaming};
use crate::syntax::{Expr, Prim, Subst};

/// Two overlapping facts that none of the specificity criteria can order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
}

/// If `special`'s head is an instance of `general`'s head (variables of
/// `general` must already be apart) and the combined guard may hold,
/// returns the instantiating substitution.
pub fn overlap(special: &Fact, general: &Fact, cfg: &Config) -> Option<Subst> {
    if special.name != general.name {
        return None;
    }
    let mut mu = Subst::new();
    if !instance_all(&general.params, &special.params, &mut mu) {
        return None;
    }
    let g = Expr::and_all(vec![special.guard.clone(), general.guard.subst(&mu)]);
    (satisfiable_fact(&head_vars(special), &g, cfg) != Sat::No).then_some(mu)
}

fn head_vars(f: &Fact) -> BTreeSet<String> {
    f.params.iter().flat_map(Expr::vars).collect()
}

/// Replaces variables outside the head with a placeholder so guards can be
/// compared up to renaming of match-bound variables.
fn blur(e: &Expr, head: &[String]) -> Expr {
    let m: BTreeMap<String, String> = e.vars().into_iter().filter(|v| !head.contains(v)).map(|v| (v, "~".to_string())).collect();
    e.rename(&m)
}

fn guard_set(g: &Expr, head: &[String]) -> Vec<Expr> {
    let mut cs: Vec<Expr> = g.conjuncts().iter().map(|c| blur(c, head)).collect();
    cs.sort();
    cs.dedup();
    cs
}

/// Whether `special` (already known to overlap `general` via `mu`) is more
/// specific than `general`.
pub fn more_specific(special: &Fact, general: &Fact, mu: &Subst, cfg: &Config) -> bool {
    if !is_renaming(mu) {
        return true;
    }
    let mut head = Vec::new();
    for p in &special.params {
        p.vars_into(&mut head);
    }
    let gs = guard_set(&special.guard, &head);
    let gg = guard_set(&general.guard.subst(mu), &head);
    let same_guard = gs == gg;
    if !same_guard {
        if cfg.defer_comparisons {
            return false;
        }
        // the special fact is more restrictive when its guard strictly contains the other
        return gg.iter().all(|c| gs.contains(c)) && gs.len() > gg.len();
    }
    term_lt(&general.body.subst(mu), &special.body)
}

fn rename_apart(f: &Fact) -> Fact {
    let mut counter = 0;
    f.rename_apart(&mut counter)
}

/// Amends the guard of `general` so it excludes the cases of `special`.
fn amendment(general: &Fact, special_apart: &Fact, mu: &Subst) -> Expr {
    // mu maps general's variables to terms over special's (renamed) variables;
    // link back every variable that is mapped to a plain variable
    let theta: Subst = mu
        .iter()
        .filter_map(|(k, v)| match v {
            Expr::Var(w) => Some((w.clone(), Expr::var(k.clone()))),
            _ => None,
        })
        .collect();
    // the remaining variables of special's head occur once, so they act as wildcards
    let mut order = Vec::new();
    for p in &general.params {
        p.vars_into(&mut order);
    }
    let differs = Expr::or_all(
        order.iter().filter_map(|x| mu.get(x).filter(|t| !matches!(t, Expr::Var(_))).map(|t| Expr::prim(Prim::Nunif, vec![Expr::var(x.clone()), t.subst(&theta)]))).collect(),
    );
    let excluded = Expr::prim(Prim::Not, vec![special_apart.guard.subst(&theta)]);
    Expr::or_all(vec![differs, excluded])
}

/// Applies the cleaning operator in the given (non-auto) mode.
pub fn clean(facts: Vec<Fact>, mode: CleanMode, cfg: &Config) -> (Vec<Fact>, Vec<Diagnostic>) {
    let opts = cfg.eval_opts();
    let apart: Vec<Fact> = facts.iter().map(rename_apart).collect();
    let mut diagnostics = Vec::new();
    let mut out = Vec::new();
    for (j, general) in facts.iter().enumerate() {
        let mut winners: Vec<usize> = Vec::new();
        for (i, special) in facts.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some(mu) = overlap(special, &apart[j], cfg) else {
                continue;
            };
            if more_specific(special, &apart[j], &mu, cfg) {
                winners.push(i);
            } else if i < j && !more_specific_either(general, special, cfg) {
                diagnostics.push(Diagnostic { kind: "incomparable".into(), message: format!("{special} and {general} overlap but neither is more specific") });
            }
        }
        if winners.is_empty() {
            out.push(general.clone());
            continue;
        }
        if mode == CleanMode::Optimized {
            continue;
        }
        let mut conj = vec![general.guard.clone()];
        for i in winners {
            let special = rename_apart_with(&facts[i], "&");
            let mut mu = Subst::new();
            instance_all(&general.params, &special.params, &mut mu);
            conj.push(amendment(general, &special, &mu));
        }
        let guard = eval(&Expr::and_all(conj), opts);
        if guard.is_false() || guard.is_bot() || satisfiable_fact(&head_vars(general), &guard, cfg) == Sat::No {
            continue;
        }
        out.push(Fact { guard, ..general.clone() });
    }
    (out, diagnostics)
}

fn more_specific_either(a: &Fact, b: &Fact, cfg: &Config) -> bool {
    let a2 = rename_apart(a);
    overlap(b, &a2, cfg).is_some_and(|mu| more_specific(b, &a2, &mu, cfg))
}

fn rename_apart_with(f: &Fact, prefix: &str) -> Fact {
    let m = f.vars().into_iter().enumerate().map(|(i, v)| (v, format!("%{prefix}{i}"))).collect();
    f.rename(&m)
}
