//! The fixpoint sequences examined by the invariant checks.

use std::sync::OnceLock;

use unfolder::apps::{abstract_fixpoint, AbstractSpec};
use unfolder::engine::interp::normalize_facts;
use unfolder::engine::{clean, overlap, CleanMode};
use unfolder::fact::FactKey;
use unfolder::{fixpoint, Config, Fact, Interpretation, Run};

use super::{clause, fixture};

pub const PLAIN: [&str; 9] = ["add", "addb", "filter", "lazy", "ones", "rev", "senior", "traces", "parity"];
pub const ABSTRACT: [&str; 3] = ["parity", "parity_acc", "demand"];

/// Every fixpoint sequence examined by the invariant checks, with its config.
pub fn sequences() -> &'static [(String, Config, Run)] {
    static SEQS: OnceLock<Vec<(String, Config, Run)>> = OnceLock::new();
    SEQS.get_or_init(compute_sequences)
}

fn compute_sequences() -> Vec<(String, Config, Run)> {
    let mut out = Vec::new();
    for name in PLAIN {
        let p = fixture(name);
        let cfg = Config::default().for_program(&p);
        // filter has one fact per combination of predicate outcomes
        let steps = if name == "filter" { 4 } else { 6 };
        out.push((name.to_string(), cfg.clone(), fixpoint(&p, steps, &cfg)));
        // amended variants of filter facts pile up from the fourth step on
        let general = Config { clean: CleanMode::General, ..cfg };
        out.push((format!("{name}/general"), general.clone(), fixpoint(&p, 3, &general)));
    }
    for name in ABSTRACT {
        let p = fixture(name);
        let cfg = Config::default().for_program(&p);
        let run = abstract_fixpoint(&p, &AbstractSpec::from_program(&p), 6, &cfg).unwrap();
        out.push((format!("{name}#"), cfg, run));
    }
    out
}

fn overlapping_pairs(i: &Interpretation, cfg: &Config) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut counter = 0;
    for (a, f) in i.facts.iter().enumerate() {
        for (b, g) in i.facts.iter().enumerate() {
            if a != b && overlap(f, &g.rename_apart(&mut counter), cfg).is_some() {
                out.push((clause(f), clause(g)));
            }
        }
    }
    out
}

fn keys(facts: &[Fact]) -> Vec<FactKey> {
    facts.iter().map(Fact::key).collect()
}

fn cleaned(facts: Vec<Fact>, mode: CleanMode, cfg: &Config) -> Vec<Fact> {
    normalize_facts(clean(facts, mode, cfg).0, cfg.trace_cap)
}

/// Number of interpretations examined and the overlapping fact pairs found.
pub fn overlaps() -> (usize, Vec<String>) {
    let mut examined = 0;
    let mut bad = Vec::new();
    for (name, cfg, run) in sequences() {
        for i in &run.interps {
            examined += 1;
            for pair in overlapping_pairs(i, cfg) {
                bad.push(format!("{name} I{}: {} / {}", i.step, pair.0, pair.1));
            }
        }
    }
    (examined, bad)
}

/// Interpretations on which cleaning a second time changes the facts.
pub fn unstable_cleans() -> Vec<String> {
    let mut bad = Vec::new();
    for (name, cfg, run) in sequences() {
        for i in &run.interps {
            for mode in [CleanMode::Optimized, CleanMode::General] {
                let once = cleaned(i.facts.clone(), mode, cfg);
                let twice = cleaned(once.clone(), mode, cfg);
                if keys(&once) != keys(&twice) {
                    bad.push(format!("{name} I{} {mode:?}", i.step));
                }
            }
        }
    }
    bad
}
