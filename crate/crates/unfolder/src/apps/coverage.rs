//! Rule coverage of the facts of each interpretation and a small test set.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::engine::{fixpoint, Config, Interpretation};
use crate::fact::Fact;
use crate::syntax::{show_clause, show_head, Program};
use crate::trace::rule_labels;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepCoverage {
    pub step: usize,
    pub covered: Vec<String>,
    /// Percentage of each function's rules that are covered.
    pub per_function: BTreeMap<String, f64>,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactRules {
    pub head: String,
    pub fact: String,
    /// Rules of the fact's first trace, in application order.
    pub rules: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub steps: Vec<StepCoverage>,
    pub rules: Vec<String>,
    /// Rules not covered by any ⊥-free fact of the last examined interpretation.
    pub uncovered: Vec<String>,
    /// First step at which every rule was covered.
    pub full_at: Option<usize>,
    /// ⊥-free facts of the last examined interpretation.
    pub facts: Vec<FactRules>,
    /// For each rule, the heads of the facts whose trace uses it.
    pub hits: BTreeMap<String, Vec<String>>,
    /// Heads of the chosen test facts.
    pub test_set: Vec<String>,
    /// The test set comes from the greedy approximation of set cover.
    pub greedy: bool,
    pub converged: bool,
}

impl CoverageReport {
    /// Plain-text table: one row per step, one column per function.
    pub fn table(&self, p: &Program) -> String {
        let funs = p.function_names();
        let mut out = format!("{:<6}", "step");
        for f in &funs {
            out.push_str(&format!(" {f:>10}"));
        }
        out.push_str(&format!(" {:>10}\n", "total"));
        for s in &self.steps {
            out.push_str(&format!("I{:<5}", s.step));
            for f in &funs {
                out.push_str(&format!(" {:>9.1}%", s.per_function.get(f).copied().unwrap_or(100.0)));
            }
            out.push_str(&format!(" {:>9.1}%\n", s.total));
        }
        out.push_str("test set:\n");
        for t in &self.test_set {
            out.push_str(&format!("  {t}\n"));
        }
        out
    }
}

fn pct(covered: usize, total: usize) -> f64 {
    if total == 0 {
        100.0
    } else {
        100.0 * covered as f64 / total as f64
    }
}

fn fact_rules(f: &Fact) -> Vec<String> {
    f.traces.first().map(rule_labels).unwrap_or_default()
}

fn step_coverage(p: &Program, interp: &Interpretation) -> StepCoverage {
    let covered: BTreeSet<String> = interp.bot_free().flat_map(fact_rules).collect();
    let per_function = p
        .function_names()
        .into_iter()
        .map(|f| {
            let rules: Vec<String> = p.rules_of(&f).map(|r| r.label.clone()).collect();
            let hit = rules.iter().filter(|l| covered.contains(*l)).count();
            (f, pct(hit, rules.len()))
        })
        .collect();
    StepCoverage { step: interp.step, total: pct(covered.len(), p.rules.len()), covered: covered.into_iter().collect(), per_function }
}

/// Greedy set cover; ties go to the smaller head, then the lexicographically smaller one.
pub fn greedy_cover(candidates: &[(String, usize, BTreeSet<String>)]) -> Vec<String> {
    let universe: BTreeSet<&String> = candidates.iter().flat_map(|(_, _, s)| s).collect();
    let mut left: BTreeSet<&String> = universe;
    let mut chosen = Vec::new();
    while !left.is_empty() {
        let best = candidates
            .iter()
            .map(|(h, size, s)| (s.iter().filter(|r| left.contains(r)).count(), h, size, s))
            .filter(|(gain, ..)| *gain > 0)
            .min_by(|a, b| b.0.cmp(&a.0).then(a.2.cmp(b.2)).then(a.1.cmp(b.1)));
        let Some((_, h, _, s)) = best else { break };
        for r in s {
            left.remove(r);
        }
        chosen.push(h.clone());
    }
    chosen
}

/// Coverage of every interpretation `I_1..I_n` of the fixpoint sequence.
/// With `stop_early` the run ends at the first step that covers every rule.
pub fn coverage(p: &Program, max_steps: usize, cfg: &Config, stop_early: bool) -> CoverageReport {
    let run = fixpoint(p, max_steps, cfg);
    let rules = p.labels();
    let mut steps = Vec::new();
    let mut last = &run.interps[0];
    let mut full_at = None;
    for interp in run.interps.iter().skip(1) {
        let s = step_coverage(p, interp);
        let full = s.covered.len() == rules.len();
        steps.push(s);
        last = interp;
        if full && full_at.is_none() {
            full_at = Some(interp.step);
            if stop_early {
                break;
            }
        }
    }
    let facts: Vec<FactRules> = last
        .bot_free()
        .map(|f| FactRules { head: show_head(&f.name, &f.params), fact: show_clause(&f.name, &f.params, &f.guard, &f.body), rules: fact_rules(f) })
        .collect();
    let mut hits: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for f in &facts {
        for r in f.rules.iter().collect::<BTreeSet<_>>() {
            hits.entry(r.clone()).or_default().push(f.head.clone());
        }
    }
    let candidates: Vec<(String, usize, BTreeSet<String>)> =
        last.bot_free().zip(&facts).map(|(f, fr)| (fr.head.clone(), f.head().size(), fr.rules.iter().cloned().collect())).collect();
    let covered: BTreeSet<&String> = facts.iter().flat_map(|f| &f.rules).collect();
    let uncovered = rules.iter().filter(|r| !covered.contains(r)).cloned().collect();
    CoverageReport { steps, rules, uncovered, full_at, facts, hits, test_set: greedy_cover(&candidates), greedy: true, converged: run.converged }
}
