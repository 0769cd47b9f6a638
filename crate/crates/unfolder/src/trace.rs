//! Rule-application traces attached to facts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{unfold_expr, Config, Interpretation};
use crate::fact::Fact;
use crate::syntax::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Body,
    Guard,
}

/// Occurrence inside a pseudofact: which side, then a 1-based child path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub part: Part,
    pub path: Vec<usize>,
}

impl Position {
    pub fn root() -> Position {
        Position { part: Part::Body, path: Vec::new() }
    }

    pub fn body(path: Vec<usize>) -> Position {
        Position { part: Part::Body, path }
    }

    pub fn is_root(&self) -> bool {
        self.part == Part::Body && self.path.is_empty()
    }

    /// Prefixes `outer` onto this position.
    pub fn under(&self, outer: &Position) -> Position {
        let part = if outer.part == Part::Guard { Part::Guard } else { self.part };
        let mut path = outer.path.clone();
        path.extend(&self.path);
        Position { part, path }
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        self.part == other.part && other.path.starts_with(&self.path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() {
            "e".to_string()
        } else {
            self.path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
        };
        match self.part {
            Part::Body => f.write_str(&path),
            Part::Guard => write!(f, "g.{path}"),
        }
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which rule fired: a program rule by label, or the implicit ⊥ rule of a function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepRule {
    Rule(String),
    Bot(String),
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepRule::Rule(l) => f.write_str(l),
            StepRule::Bot(fname) => write!(f, "Bot_{fname}"),
        }
    }
}

impl Serialize for StepRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub rule: StepRule,
    pub position: Position,
}

impl Step {
    pub fn rule(label: &str, position: Position) -> Step {
        Step { rule: StepRule::Rule(label.to_string()), position }
    }

    pub fn bot(fname: &str, position: Position) -> Step {
        Step { rule: StepRule::Bot(fname.to_string()), position }
    }
}

pub type Trace = Vec<Step>;

/// Moves every step of every trace under `o`.
pub fn compose_position(o: &Position, traces: &[Trace]) -> Vec<Trace> {
    traces
        .iter()
        .map(|t| t.iter().map(|s| Step { rule: s.rule.clone(), position: s.position.under(o) }).collect())
        .collect()
}

/// Display options for trace annotations.
#[derive(Clone, Copy, Debug, Default)]
pub struct TraceStyle {
    pub positions: bool,
    pub bots: bool,
}

pub fn show_trace(t: &Trace, style: TraceStyle) -> String {
    let parts: Vec<String> = t
        .iter()
        .filter(|s| style.bots || matches!(s.rule, StepRule::Rule(_)))
        .map(|s| if style.positions { format!("{}@{}", s.rule, s.position) } else { s.rule.to_string() })
        .collect();
    format!("<{}>", parts.join(","))
}

/// Labels of program rules appearing in a trace, in order.
pub fn rule_labels(t: &Trace) -> Vec<String> {
    t.iter()
        .filter_map(|s| match &s.rule {
            StepRule::Rule(l) => Some(l.clone()),
            StepRule::Bot(_) => None,
        })
        .collect()
}

/// Keeps the first `cap` distinct traces, preserving order.
pub fn dedup_cap(traces: impl IntoIterator<Item = Trace>, cap: usize) -> Vec<Trace> {
    let mut out: Vec<Trace> = Vec::new();
    for t in traces {
        if out.len() >= cap {
            break;
        }
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Name of the nullary function that wraps a goal expression.
pub const GOAL: &str = "goal'";

/// Traces recorded for `f` in `i` (matched up to canonical renaming).
pub fn traces_of_fact(i: &Interpretation, f: &Fact) -> Vec<Trace> {
    let key = f.canonical().key();
    i.facts.iter().chain(&i.bot_facts).find(|g| g.key() == key).map(|g| g.traces.clone()).unwrap_or_default()
}

/// Traces of an expression: unfold `goal' = e` against `i` and drop the
/// leading goal step from every trace of every resulting fact.
pub fn traces_of_expr(i: &Interpretation, e: &Expr, cfg: &Config) -> Vec<Trace> {
    let facts = unfold_expr(GOAL, e, &i.sources(), cfg);
    let tails = facts.iter().flat_map(|f| f.traces.iter().map(|t| t[1..].to_vec()));
    dedup_cap(tails, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_prefixes_positions() {
        let t = vec![vec![Step::rule("A", Position::root()), Step::rule("B", Position::body(vec![2]))]];
        let moved = compose_position(&Position::body(vec![1]), &t);
        assert_eq!(moved[0][0].position, Position::body(vec![1]));
        assert_eq!(moved[0][1].position, Position::body(vec![1, 2]));
        let g = Position { part: Part::Guard, path: vec![3] };
        assert_eq!(compose_position(&g, &t)[0][1].position.to_string(), "g.3.2");
    }

    #[test]
    fn display_hides_positions_and_bots_by_default() {
        let t = vec![Step::rule("Goal3", Position::root()), Step::bot("j", Position::body(vec![1]))];
        assert_eq!(show_trace(&t, TraceStyle::default()), "<Goal3>");
        assert_eq!(show_trace(&t, TraceStyle { positions: true, bots: true }), "<Goal3@e,Bot_j@1>");
    }
}
