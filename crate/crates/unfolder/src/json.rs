//! Versioned JSON forms of facts, interpretations and runs.

use serde::Serialize;
use serde_json::{json, Value};

use crate::engine::{Interpretation, Run};
use crate::fact::Fact;
use crate::syntax::{show_guard, show_head};
use crate::trace::Trace;

pub const SCHEMA: u64 = 1;

#[derive(Serialize)]
struct FactJson<'a> {
    head: String,
    guard: String,
    body: String,
    origin: &'a str,
    trace: &'a [crate::trace::Step],
    traces: &'a [Trace],
}

pub fn fact(f: &Fact) -> Value {
    let v = FactJson {
        head: show_head(&f.name, &f.params),
        guard: show_guard(&f.guard),
        body: f.body.to_string(),
        origin: &f.origin,
        trace: f.traces.first().map(Vec::as_slice).unwrap_or(&[]),
        traces: &f.traces,
    };
    serde_json::to_value(v).expect("facts serialize")
}

fn interp_body(i: &Interpretation) -> Value {
    json!({
        "step": i.step,
        "facts": i.facts.iter().map(fact).collect::<Vec<_>>(),
        "bot_facts": i.bot_facts.iter().map(fact).collect::<Vec<_>>(),
    })
}

pub fn interpretation(i: &Interpretation) -> Value {
    with_schema(interp_body(i))
}

pub fn run(r: &Run) -> Value {
    with_schema(json!({
        "mode": r.mode,
        "converged": r.converged,
        "interpretations": r.interps.iter().map(interp_body).collect::<Vec<_>>(),
        "diagnostics": r.diagnostics,
    }))
}

/// Serializes `v` and adds the schema version to the resulting object.
pub fn with_schema(v: impl Serialize) -> Value {
    let mut v = serde_json::to_value(v).expect("value serializes");
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}
