use super::analysis::effective_mode;
use super::clean::{clean, Diagnostic};
use super::config::{CleanMode, Config};
use super::interp::{normalize_facts, Interpretation};
use super::unfold::unfold_rule;
use crate::fact::Fact;
use crate::syntax::Program;

/// A computed prefix `I_0, I_1, ...` of the fixpoint sequence.
#[derive(Clone, Debug, Default)]
pub struct Run {
    pub interps: Vec<Interpretation>,
    pub converged: bool,
    pub mode: Option<CleanMode>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Run {
    pub fn last(&self) -> &Interpretation {
        self.interps.last().expect("a run holds at least I_0")
    }

    /// Index of the last computed interpretation.
    pub fn steps(&self) -> usize {
        self.interps.len() - 1
    }

    pub fn at(&self, n: usize) -> Option<&Interpretation> {
        self.interps.get(n)
    }
}

/// Unfolds every rule against `I` and joins the result with `I` (before cleaning).
pub fn unfold_all(p: &Program, interp: &Interpretation, cfg: &Config) -> Vec<Fact> {
    let sources = interp.sources();
    let mut out: Vec<Fact> = interp.facts.clone();
    for rule in &p.rules {
        out.extend(unfold_rule(rule, &sources, cfg));
    }
    out
}

/// Splits unguarded ⊥ facts off and adds them to the accumulated ⊥ facts.
pub fn split_bottoms(facts: Vec<Fact>, previous: &[Fact], cap: usize) -> (Vec<Fact>, Vec<Fact>) {
    let facts = normalize_facts(facts, cap);
    let (bots, rest): (Vec<Fact>, Vec<Fact>) = facts.into_iter().partition(Fact::is_bottom);
    let bots = normalize_facts(previous.iter().cloned().chain(bots), cap);
    (rest, bots)
}

/// One application of the immediate consequence operator followed by cleaning.
pub fn u_step(p: &Program, interp: &Interpretation, cfg: &Config, mode: CleanMode) -> (Interpretation, Vec<Diagnostic>) {
    let (rest, bots) = split_bottoms(unfold_all(p, interp, cfg), &interp.bot_facts, cfg.trace_cap);
    let (facts, diags) = clean(rest, mode, cfg);
    (Interpretation { step: interp.step + 1, facts: normalize_facts(facts, cfg.trace_cap), bot_facts: bots }, diags)
}

pub fn run_with_mode(p: &Program, max_steps: usize, cfg: &Config, mode: CleanMode) -> Run {
    run_observed(p, max_steps, cfg, mode, |_| true)
}

/// Like `run_with_mode`, calling `keep_going` on every new interpretation;
/// the run stops early once it returns false.
pub fn run_observed(p: &Program, max_steps: usize, cfg: &Config, mode: CleanMode, mut keep_going: impl FnMut(&Interpretation) -> bool) -> Run {
    let cfg = &cfg.for_program(p);
    let mut run = Run { interps: vec![Interpretation::empty()], converged: false, mode: Some(mode), diagnostics: Vec::new() };
    for _ in 0..max_steps {
        let (next, diags) = u_step(p, run.last(), cfg, mode);
        for d in diags {
            if !run.diagnostics.contains(&d) {
                run.diagnostics.push(d);
            }
        }
        if next.same_facts(run.last()) {
            run.converged = true;
            break;
        }
        run.interps.push(next);
        if !keep_going(run.last()) {
            break;
        }
    }
    run
}

/// Iterates the operator from the empty interpretation for at most
/// `max_steps` steps or until two consecutive interpretations coincide.
pub fn fixpoint(p: &Program, max_steps: usize, cfg: &Config) -> Run {
    let cfg = &cfg.for_program(p);
    let mode = effective_mode(p, cfg);
    run_with_mode(p, max_steps, cfg, mode)
}
