use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

/// An error response: `{"error": message, "code": identifier}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn unknown_session(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<unfolder::Error> for ApiError {
    fn from(e: unfolder::Error) -> Self {
        use unfolder::Error::*;
        let (status, code) = match &e {
            UnknownNode(_) => (StatusCode::NOT_FOUND, "unknown_node"),
            AlreadyAnswered(_) => (StatusCode::CONFLICT, "already_answered"),
            SessionClosed => (StatusCode::CONFLICT, "session_closed"),
            GoalUndefined(_) => (StatusCode::UNPROCESSABLE_ENTITY, "goal_undefined"),
            Parse { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "parse_error"),
            CataDiverged(_) | Invalid(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_program"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "code": self.code }))).into_response()
    }
}
