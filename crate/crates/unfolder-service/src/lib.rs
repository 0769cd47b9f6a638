//! HTTP facade over debugging sessions and fixpoint sequences.
//!
//! Every mutation is a pure function of the session state and the request.
//! With a session log, each accepted mutation is appended as one JSON line
//! and the log is replayed on startup.

mod error;
mod session;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};
use unfolder::apps::Verdict;
use unfolder::json::with_schema;

pub use error::ApiError;
pub use session::Session;
pub use store::{Event, Store};

/// Options for `router` and `serve`.
#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    /// Append accepted mutations here and replay them on startup.
    pub session_log: Option<PathBuf>,
    /// Origin allowed by CORS; any origin when unset.
    pub cors_origin: Option<String>,
    /// Largest step count accepted for sessions and interpretation requests.
    pub max_steps: Option<usize>,
}

type AppState = Arc<Store>;
type ApiResult = Result<Json<Value>, ApiError>;

#[derive(Deserialize)]
struct CreateRequest {
    program: String,
    goal: String,
    steps: Option<usize>,
}

#[derive(Deserialize)]
struct AnswerRequest {
    node: usize,
    verdict: Verdict,
}

fn body<T>(r: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    r.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn create(State(store): State<AppState>, req: Result<Json<CreateRequest>, JsonRejection>) -> Result<(StatusCode, Json<Value>), ApiError> {
    let req = body(req)?;
    let session = store.create(req.program, req.goal, req.steps).await?;
    let s = session.read().await;
    Ok((StatusCode::CREATED, Json(with_schema(s.summary()))))
}

async fn show(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id).await?;
    let s = s.read().await;
    Ok(Json(with_schema(s.summary())))
}

async fn question(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id).await?;
    let s = s.read().await;
    let node = s.question();
    Ok(Json(with_schema(json!({ "done": node.is_none(), "node": node, "status": s.debug.status() }))))
}

async fn answer(State(store): State<AppState>, Path(id): Path<String>, req: Result<Json<AnswerRequest>, JsonRejection>) -> ApiResult {
    let req = body(req)?;
    let v = store.answer(&id, req.node, req.verdict).await?;
    Ok(Json(with_schema(v)))
}

async fn blame(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id).await?;
    let s = s.read().await;
    Ok(Json(with_schema(json!({ "rule": s.debug.blamed(), "status": s.debug.status() }))))
}

async fn interpretation(State(store): State<AppState>, Path((id, n)): Path<(String, usize)>) -> ApiResult {
    let s = store.get(&id).await?;
    let s = s.read().await;
    Ok(Json(s.interpretation(n, store.max_steps)?))
}

async fn delete(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    store.delete(&id).await?;
    Ok(Json(with_schema(json!({ "deleted": id }))))
}

fn cors(origin: Option<&str>) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    match origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => layer.allow_origin(o),
        None => layer.allow_origin(Any),
    }
}

/// The service routes over `store`.
pub fn router_with(store: Arc<Store>, cors_origin: Option<&str>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show).delete(delete))
        .route("/sessions/{id}/question", get(question))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/blame", get(blame))
        .route("/sessions/{id}/interpretations/{n}", get(interpretation))
        .layer(cors(cors_origin))
        .with_state(store)
}

/// Routes over a fresh store, after replaying the session log if one is set.
pub fn router(cfg: &ServiceConfig) -> std::io::Result<Router> {
    let store = Store::open(cfg.session_log.as_deref(), cfg.max_steps)?;
    Ok(router_with(Arc::new(store), cfg.cors_origin.as_deref()))
}

pub async fn serve(addr: SocketAddr, cfg: &ServiceConfig) -> std::io::Result<()> {
    let app = router(cfg)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app).await
}
