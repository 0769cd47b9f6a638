#![allow(dead_code)]

use std::collections::BTreeSet;

use unfolder::engine::Interpretation;
use unfolder::syntax::show_clause;
use unfolder::trace::{rule_labels, Trace};
use unfolder::{parse_program, Fact, Program};

pub fn source(name: &str) -> String {
    let path = format!("{}/fixtures/{name}.ufl", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Program {
    parse_program(&source(name)).expect("fixture parses")
}

pub fn clause(f: &Fact) -> String {
    show_clause(&f.name, &f.params, &f.guard, &f.body)
}

/// Facts of an interpretation as listing lines without traces.
pub fn listing(i: &Interpretation) -> BTreeSet<String> {
    i.facts.iter().map(clause).collect()
}

pub fn bot_listing(i: &Interpretation) -> BTreeSet<String> {
    i.bot_facts.iter().map(clause).collect()
}

pub fn set(lines: &[&str]) -> BTreeSet<String> {
    lines.iter().map(|s| s.to_string()).collect()
}

pub fn find<'a>(i: &'a Interpretation, line: &str) -> Option<&'a Fact> {
    i.facts.iter().find(|f| clause(f) == line)
}

pub fn labels(t: &Trace) -> String {
    rule_labels(t).join(",")
}

pub mod equivalence;
pub mod sequences;
