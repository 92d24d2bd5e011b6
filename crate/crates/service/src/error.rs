use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use seedforge_core::Error as CoreError;

/// Error response: `{"error": code, "detail": text}` with a matching status.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {detail}")]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    detail: &'a str,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            detail: detail.into(),
        }
    }

    pub fn bad_request(code: &'static str, detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, detail)
    }

    pub fn not_found(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: self.code,
            detail: &self.detail,
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<CoreError> for ApiError {
    fn from(err: CoreError) -> Self {
        let detail = err.to_string();
        match err {
            CoreError::NotFound(_) => Self::new(StatusCode::NOT_FOUND, "entity_not_found", detail),
            CoreError::SessionNotFound(_) => {
                Self::new(StatusCode::NOT_FOUND, "session_not_found", detail)
            }
            CoreError::DuplicateEntity(_) => {
                Self::new(StatusCode::CONFLICT, "duplicate_entity", detail)
            }
            CoreError::EmptySurface => Self::bad_request("empty_surface", detail),
            CoreError::UnknownCandidate(_) => Self::bad_request("unknown_candidate", detail),
            CoreError::DuplicateDecision(_) => Self::bad_request("duplicate_decision", detail),
            CoreError::InvalidEntry { .. } => Self::bad_request("invalid_entry", detail),
            CoreError::Parse { .. } => Self::bad_request("parse_error", detail),
            CoreError::NoResolvableSeed => Self::bad_request("no_resolvable_seed", detail),
            CoreError::InvalidRequest(_) => Self::bad_request("invalid_request", detail),
            CoreError::InvalidSpan { .. } => Self::bad_request("invalid_span", detail),
            CoreError::EmptyVocabulary | CoreError::EmptyIndex => {
                Self::new(StatusCode::SERVICE_UNAVAILABLE, "model_unavailable", detail)
            }
            CoreError::Storage(_) | CoreError::Io(_) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "storage_error", detail)
            }
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        Self::bad_request("invalid_body", rejection.body_text())
    }
}

impl From<PathRejection> for ApiError {
    fn from(rejection: PathRejection) -> Self {
        Self::bad_request("invalid_path", rejection.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(rejection: QueryRejection) -> Self {
        Self::bad_request("invalid_query", rejection.body_text())
    }
}
