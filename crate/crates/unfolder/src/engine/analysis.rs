//! Completeness and productivity analyses used to pick the clean mode.

use std::collections::BTreeSet;

use super::config::{CleanMode, Config};
use super::cover::{exhaustive, Signature};
use super::fixpoint::{u_step, unfold_all};
use super::interp::Interpretation;
use crate::syntax::{Expr, Program};

/// Every tuple of constructor values is matched by some unguarded rule.
/// Guarded rules are not counted, so the answer errs towards incomplete.
pub fn is_complete(p: &Program, f: &str) -> bool {
    let Some(arity) = p.arity(f) else {
        return false;
    };
    let all: Vec<_> = p.rules_of(f).collect();
    if all.is_empty() {
        return false;
    }
    let rows: Vec<Vec<Expr>> = all.iter().filter(|r| r.guard.is_true()).map(|r| r.params.clone()).collect();
    exhaustive(&Signature::of(p), &rows, arity)
}

/// Labels of rules that yield a fact with a non-⊥ body within the probe.
/// The probe runs in optimized mode and inspects facts before cleaning, so
/// a fact that is later shadowed still counts.
pub fn productive_rules(p: &Program, cfg: &Config) -> BTreeSet<String> {
    let cfg = &cfg.for_program(p);
    let mut out = BTreeSet::new();
    let mut interp = Interpretation::empty();
    for _ in 0..cfg.probe_steps {
        let unfolded = unfold_all(p, &interp, cfg);
        out.extend(unfolded.iter().filter(|f| !f.body.is_bot()).map(|f| f.origin.clone()));
        if out.len() == p.rules.len() {
            break;
        }
        let (next, _) = u_step(p, &interp, cfg, CleanMode::Optimized);
        if next.same_facts(&interp) {
            break;
        }
        interp = next;
    }
    out
}

pub fn is_productive(p: &Program, label: &str, cfg: &Config) -> bool {
    productive_rules(p, cfg).contains(label)
}

/// Resolves `Auto` to a concrete clean mode for this program.
pub fn effective_mode(p: &Program, cfg: &Config) -> CleanMode {
    match cfg.clean {
        CleanMode::Auto => {
            let complete = p.function_names().iter().all(|f| is_complete(p, f));
            if complete && {
                let prod = productive_rules(p, cfg);
                p.labels().iter().all(|l| prod.contains(l))
            } {
                CleanMode::Optimized
            } else {
                CleanMode::General
            }
        }
        m => m,
    }
}
