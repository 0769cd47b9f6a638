//! Abstract interpretation: unfolding over abstract constructors whose
//! fact heads are normalized by catamorphism rules after every step.

use std::collections::BTreeMap;

use crate::engine::clean::clean;
use crate::engine::fixpoint::{split_bottoms, unfold_all};
use crate::engine::interp::normalize_facts;
use crate::engine::{effective_mode, CleanMode, Config, Interpretation, Run};
use crate::error::{Error, Result};
use crate::exec::{normalize, RuleBase, Strategy};
use crate::fact::Fact;
use crate::syntax::unify::instance_all;
use crate::syntax::{Expr, Program, Rule};

/// Bound on rewriting steps when applying a catamorphism to one term.
pub const CATA_FUEL: usize = 10_000;

/// Catamorphism rules and the constructors they fold.
#[derive(Clone, Debug)]
pub struct AbstractSpec {
    pub rules: Vec<Rule>,
    /// Constructor name to the catamorphism applied to terms rooted at it.
    folds: BTreeMap<String, String>,
}

impl AbstractSpec {
    pub fn new(rules: Vec<Rule>) -> Self {
        let mut folds = BTreeMap::new();
        for r in &rules {
            if let Some(Expr::Con(k, _, _)) = r.params.first() {
                folds.entry(k.clone()).or_insert_with(|| r.name.clone());
            }
        }
        AbstractSpec { rules, folds }
    }

    /// The `cata` section of a program.
    pub fn from_program(p: &Program) -> Self {
        AbstractSpec::new(p.cata.clone())
    }
}

struct Folder<'a> {
    spec: &'a AbstractSpec,
    base: RuleBase,
}

impl Folder<'_> {
    /// Folds every maximal abstract subterm. The flag is false when some
    /// subterm has no constructor normal form (e.g. it contains variables).
    fn fold(&self, t: &Expr) -> Result<(Expr, bool)> {
        match t {
            Expr::Con(k, _, _) if self.spec.folds.contains_key(k) => {
                let call = Expr::fun(self.spec.folds[k].clone(), vec![t.clone()]);
                let (r, _) = normalize(&self.base, &call, Strategy::Outermost, CATA_FUEL).ok_or_else(|| Error::CataDiverged(t.to_string()))?;
                if r.is_term() && !r.contains_bot() && !r.contains_call() {
                    Ok((r, true))
                } else {
                    Ok((t.clone(), false))
                }
            }
            Expr::Con(k, n, args) => {
                let mut ok = true;
                let mut out = Vec::new();
                for a in args {
                    let (x, fine) = self.fold(a)?;
                    ok &= fine;
                    out.push(x);
                }
                Ok((Expr::Con(k.clone(), *n, out), ok))
            }
            _ => Ok((t.clone(), true)),
        }
    }

    fn fold_head(&self, f: &Fact) -> Result<(Fact, bool)> {
        let mut ok = true;
        let mut params = Vec::new();
        for p in &f.params {
            let (x, fine) = self.fold(p)?;
            ok &= fine;
            params.push(x);
        }
        Ok((Fact { params, ..f.clone() }, ok))
    }
}

/// Drops facts that are instances of another fact with the same guard and body.
fn subsume(facts: Vec<Fact>) -> Vec<Fact> {
    let keep: Vec<bool> = facts
        .iter()
        .enumerate()
        .map(|(i, f)| {
            !facts.iter().enumerate().any(|(j, g)| {
                if i == j || g.name != f.name || g.key() == f.key() {
                    return false;
                }
                let mut counter = 0;
                let g = g.rename_apart(&mut counter);
                let mut mu = BTreeMap::new();
                instance_all(&g.params, &f.params, &mut mu) && g.guard.subst(&mu) == f.guard && g.body.subst(&mu) == f.body
            })
        })
        .collect();
    facts.into_iter().zip(keep).filter_map(|(f, k)| k.then_some(f)).collect()
}

/// One abstract step: unfold, clean, fold heads, drop subsumed facts, clean again.
/// ⊥ facts whose heads do not fold to constructor terms are discarded.
pub fn abstract_step(p: &Program, folder_spec: &AbstractSpec, interp: &Interpretation, cfg: &Config, mode: CleanMode) -> Result<Interpretation> {
    let folder = Folder { spec: folder_spec, base: RuleBase::from_rules(p.rules.iter().chain(&folder_spec.rules)) };
    let (rest, bots) = split_bottoms(unfold_all(p, interp, cfg), &interp.bot_facts, cfg.trace_cap);
    let (cleaned, _) = clean(rest, mode, cfg);
    let mut folded = Vec::new();
    for f in &cleaned {
        folded.push(folder.fold_head(f)?.0);
    }
    let mut kept_bots = Vec::new();
    for f in &bots {
        let (g, ok) = folder.fold_head(f)?;
        if ok {
            kept_bots.push(g);
        }
    }
    let merged = subsume(normalize_facts(folded, cfg.trace_cap));
    let (facts, _) = clean(merged, mode, cfg);
    Ok(Interpretation { step: interp.step + 1, facts: normalize_facts(facts, cfg.trace_cap), bot_facts: normalize_facts(kept_bots, cfg.trace_cap) })
}

/// Iterates the abstract step from the empty interpretation until two
/// consecutive interpretations coincide or `max_steps` is reached.
pub fn abstract_fixpoint(p: &Program, spec: &AbstractSpec, max_steps: usize, cfg: &Config) -> Result<Run> {
    let cfg = &cfg.for_program(p);
    let mode = effective_mode(p, cfg);
    let mut run = Run { interps: vec![Interpretation::empty()], converged: false, mode: Some(mode), diagnostics: Vec::new() };
    for _ in 0..max_steps {
        let next = abstract_step(p, spec, run.last(), cfg, mode)?;
        if next.same_facts(run.last()) {
            run.converged = true;
            break;
        }
        run.interps.push(next);
    }
    Ok(run)
}
