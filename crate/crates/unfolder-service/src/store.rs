use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::RwLock;
use unfolder::apps::Verdict;

use crate::error::ApiError;
use crate::session::{Session, DEFAULT_STEPS};

/// Default bound on steps for sessions and interpretation requests.
pub const MAX_STEPS: usize = 16;

/// An accepted mutation, as written to the session log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Event {
    Create { id: String, program: String, goal: String, steps: usize, created_at: u64 },
    Answer { id: String, node: usize, verdict: Verdict },
    Delete { id: String },
}

pub struct Store {
    sessions: RwLock<BTreeMap<String, Arc<RwLock<Session>>>>,
    next_id: Mutex<u64>,
    log: Option<Mutex<File>>,
    pub max_steps: usize,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn id_number(id: &str) -> Option<u64> {
    id.strip_prefix('s')?.parse().ok()
}

fn invalid(line: usize, msg: impl std::fmt::Display) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("session log line {line}: {msg}"))
}

/// Applies logged events in order. A truncated last line is ignored.
fn replay(path: &Path) -> io::Result<(BTreeMap<String, Session>, u64)> {
    let mut sessions = BTreeMap::new();
    let mut next = 1;
    if !path.exists() {
        return Ok((sessions, next));
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<io::Result<_>>()?;
    for (k, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: Event = match serde_json::from_str(line) {
            Ok(e) => e,
            Err(_) if k + 1 == lines.len() => break,
            Err(e) => return Err(invalid(k + 1, e)),
        };
        match event {
            Event::Create { id, program, goal, steps, created_at } => {
                next = next.max(id_number(&id).map_or(next, |n| n + 1));
                let s = Session::new(id.clone(), program, goal, steps, created_at).map_err(|e| invalid(k + 1, e.message))?;
                sessions.insert(id, s);
            }
            Event::Answer { id, node, verdict } => {
                let s = sessions.get_mut(&id).ok_or_else(|| invalid(k + 1, format!("no session {id}")))?;
                s.debug.answer(node, verdict).map_err(|e| invalid(k + 1, e))?;
            }
            Event::Delete { id } => {
                sessions.remove(&id);
            }
        }
    }
    Ok((sessions, next))
}

impl Store {
    pub fn new(max_steps: Option<usize>) -> Store {
        Store { sessions: RwLock::new(BTreeMap::new()), next_id: Mutex::new(1), log: None, max_steps: max_steps.unwrap_or(MAX_STEPS) }
    }

    /// A store holding the sessions recorded in `log`, which also receives
    /// every later mutation.
    pub fn open(log: Option<&Path>, max_steps: Option<usize>) -> io::Result<Store> {
        let mut store = Store::new(max_steps);
        if let Some(path) = log {
            let (sessions, next) = replay(path)?;
            store.sessions = RwLock::new(sessions.into_iter().map(|(k, s)| (k, Arc::new(RwLock::new(s)))).collect());
            store.next_id = Mutex::new(next);
            store.log = Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?));
        }
        Ok(store)
    }

    fn record(&self, e: &Event) -> Result<(), ApiError> {
        let Some(log) = &self.log else { return Ok(()) };
        let mut f = log.lock().map_err(|_| ApiError::internal("session log poisoned"))?;
        let line = serde_json::to_string(e).map_err(|e| ApiError::internal(e.to_string()))?;
        writeln!(f, "{line}").and_then(|_| f.flush()).map_err(|e| ApiError::internal(e.to_string()))
    }

    fn fresh_id(&self) -> Result<String, ApiError> {
        let mut n = self.next_id.lock().map_err(|_| ApiError::internal("id counter poisoned"))?;
        let id = format!("s{n}");
        *n += 1;
        Ok(id)
    }

    pub async fn create(&self, program: String, goal: String, steps: Option<usize>) -> Result<Arc<RwLock<Session>>, ApiError> {
        let steps = steps.unwrap_or(DEFAULT_STEPS);
        if steps == 0 || steps > self.max_steps {
            return Err(ApiError::new(axum::http::StatusCode::UNPROCESSABLE_ENTITY, "too_many_steps", format!("steps must be within 1..={}", self.max_steps)));
        }
        let created_at = now();
        let mut s = Session::new(String::new(), program.clone(), goal.clone(), steps, created_at)?;
        let mut sessions = self.sessions.write().await;
        let id = self.fresh_id()?;
        s.id = id.clone();
        self.record(&Event::Create { id: id.clone(), program, goal, steps, created_at })?;
        let s = Arc::new(RwLock::new(s));
        sessions.insert(id, s.clone());
        Ok(s)
    }

    pub async fn get(&self, id: &str) -> Result<Arc<RwLock<Session>>, ApiError> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::unknown_session(id))
    }

    /// Records a verdict. The session stays locked until the event is
    /// logged and changes only once it is.
    pub async fn answer(&self, id: &str, node: usize, verdict: Verdict) -> Result<Value, ApiError> {
        let s = self.get(id).await?;
        let mut s = s.write().await;
        let mut debug = s.debug.clone();
        debug.answer(node, verdict)?;
        self.record(&Event::Answer { id: id.to_string(), node, verdict })?;
        s.debug = debug;
        Ok(json!({ "status": s.debug.status(), "question": s.question(), "blame": s.debug.blamed() }))
    }

    pub async fn delete(&self, id: &str) -> Result<(), ApiError> {
        let mut sessions = self.sessions.write().await;
        let s = sessions.remove(id).ok_or_else(|| ApiError::unknown_session(id))?;
        // wait for commands already running on the session
        drop(s.write().await);
        self.record(&Event::Delete { id: id.to_string() })
    }

    pub async fn ids(&self) -> Vec<String> {
        self.sessions.read().await.keys().cloned().collect()
    }
}
