use std::sync::Mutex;

use axum::http::StatusCode;
use serde_json::{json, Value};
use unfolder::apps::{build_edt, DebugSession};
use unfolder::json::{fact, with_schema};
use unfolder::syntax::validate;
use unfolder::trace::TraceStyle;
use unfolder::{fixpoint, parse_expr, parse_program, Config, Program, Run};

use crate::error::ApiError;

/// Steps used to find the goal's value when a request does not say.
pub const DEFAULT_STEPS: usize = 8;

pub struct Session {
    pub id: String,
    pub program_text: String,
    pub goal_text: String,
    pub created_at: u64,
    pub program: Program,
    pub debug: DebugSession,
    /// Longest fixpoint prefix computed so far for interpretation requests.
    run: Mutex<Option<Run>>,
}

impl Session {
    pub fn new(id: String, program_text: String, goal_text: String, steps: usize, created_at: u64) -> Result<Session, ApiError> {
        let program = parse_program(&program_text)?;
        let violations = validate(&program);
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| format!("{}: {}", v.rule, v.message)).collect();
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_program", msgs.join("; ")));
        }
        let goal = parse_expr(&program, &goal_text)?;
        let edt = build_edt(&program, &goal, steps, &Config::default())?;
        Ok(Session { id, program_text, goal_text, created_at, program, debug: DebugSession::new(edt), run: Mutex::new(None) })
    }

    pub fn node(&self, id: usize) -> Option<Value> {
        let n = self.debug.edt.node(id)?;
        Some(json!({
            "id": n.id,
            "call": n.call.to_string(),
            "value": n.value.to_string(),
            "rule": n.rule,
            "children": n.children,
            "parent": self.debug.edt.parent(id),
            "verdict": self.debug.verdict(id),
        }))
    }

    pub fn question(&self) -> Option<Value> {
        self.debug.next_question().and_then(|n| self.node(n))
    }

    pub fn summary(&self) -> Value {
        let nodes: Vec<Value> = (0..self.debug.edt.len()).filter_map(|i| self.node(i)).collect();
        json!({
            "id": self.id,
            "goal": self.goal_text,
            "created_at": self.created_at,
            "edt": { "nodes": nodes, "rendered": self.debug.edt.render() },
            "status": self.debug.status(),
            "question": self.question(),
            "blame": self.debug.blamed(),
        })
    }

    /// `I_n` of the program; past convergence this is the fixpoint itself.
    pub fn interpretation(&self, n: usize, max_steps: usize) -> Result<Value, ApiError> {
        if n > max_steps {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "too_many_steps", format!("at most {max_steps} steps")));
        }
        let mut cache = self.run.lock().map_err(|_| ApiError::internal("interpretation cache poisoned"))?;
        let fresh = match cache.as_ref() {
            Some(r) => r.steps() < n && !r.converged,
            None => true,
        };
        if fresh {
            *cache = Some(fixpoint(&self.program, n, &Config::default()));
        }
        let run = cache.as_ref().expect("filled above");
        let i = run.at(n).unwrap_or_else(|| run.last());
        let listing: Vec<String> = i.listing(TraceStyle::default()).into_iter().map(|l| format!("* {l}")).collect();
        Ok(with_schema(json!({
            "requested": n,
            "step": i.step,
            "converged": run.converged && run.steps() <= n,
            "mode": run.mode,
            "facts": i.facts.iter().map(fact).collect::<Vec<_>>(),
            "bot_facts": i.bot_facts.iter().map(fact).collect::<Vec<_>>(),
            "listing": listing,
        })))
    }
}
