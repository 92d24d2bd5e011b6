use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{FromRequest, FromRequestParts, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use seedforge_core::{CandidateEntry, ExportFormat, ImportFormat, RenderFormat, Session};

use crate::workbench::{
    DecisionBody, EntityBody, ExpandBody, HighlightBody, PatchEntityBody, SessionExpandBody,
    Workbench,
};
use crate::ApiError;

#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
struct Json<T>(T);

impl<T: Serialize> IntoResponse for Json<T> {
    fn into_response(self) -> Response {
        axum::Json(self.0).into_response()
    }
}

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Path), rejection(ApiError))]
struct Path<T>(T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Query), rejection(ApiError))]
struct Query<T>(T);

type AppState = State<Arc<Workbench>>;
type ApiResult<T> = Result<T, ApiError>;

pub fn router(workbench: Arc<Workbench>) -> Router {
    Router::new()
        .route("/models", get(models))
        .route("/expand", post(expand))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/entities", post(add_entity))
        .route(
            "/sessions/{id}/entities/{surface}",
            axum::routing::patch(patch_entity).delete(delete_entity),
        )
        .route("/sessions/{id}/import", post(import))
        .route("/sessions/{id}/expand", post(expand_session))
        .route("/sessions/{id}/feedback", post(feedback))
        .route("/sessions/{id}/export", get(export))
        .route("/sessions/{id}/highlight", post(highlight))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .layer(CorsLayer::permissive())
        .with_state(workbench)
}

#[derive(Serialize)]
struct ModelsResponse {
    models: Vec<crate::ModelDescriptor>,
}

async fn models(State(wb): AppState) -> Json<ModelsResponse> {
    Json(ModelsResponse {
        models: wb.models(),
    })
}

#[derive(Serialize)]
struct CandidatesResponse {
    candidates: Vec<CandidateEntry>,
}

async fn expand(
    State(wb): AppState,
    Json(body): Json<ExpandBody>,
) -> ApiResult<Json<CandidatesResponse>> {
    let candidates = tokio::task::spawn_blocking(move || wb.expand(&body))
        .await
        .map_err(internal)??;
    Ok(Json(CandidatesResponse { candidates }))
}

#[derive(Deserialize)]
struct CreateSessionBody {
    name: String,
}

async fn create_session(
    State(wb): AppState,
    Json(body): Json<CreateSessionBody>,
) -> ApiResult<(StatusCode, Json<Session>)> {
    Ok((StatusCode::CREATED, Json(wb.create_session(&body.name)?)))
}

async fn get_session(State(wb): AppState, Path(id): Path<String>) -> ApiResult<Json<Session>> {
    Ok(Json(wb.session(&id)?))
}

async fn add_entity(
    State(wb): AppState,
    Path(id): Path<String>,
    Json(body): Json<EntityBody>,
) -> ApiResult<(StatusCode, Json<Session>)> {
    Ok((StatusCode::CREATED, Json(wb.add_entity(&id, &body)?)))
}

async fn patch_entity(
    State(wb): AppState,
    Path((id, surface)): Path<(String, String)>,
    Json(body): Json<PatchEntityBody>,
) -> ApiResult<Json<Session>> {
    Ok(Json(wb.patch_entity(&id, &surface, &body)?))
}

async fn delete_entity(
    State(wb): AppState,
    Path((id, surface)): Path<(String, String)>,
) -> ApiResult<Json<Session>> {
    Ok(Json(wb.delete_entity(&id, &surface)?))
}

fn format_param<T: std::str::FromStr<Err = String>>(
    params: &HashMap<String, String>,
    default: &str,
) -> ApiResult<T> {
    let raw = params.get("format").map_or(default, String::as_str);
    raw.parse()
        .map_err(|e: String| ApiError::bad_request("invalid_request", format!("format: {e}")))
}

async fn import(
    State(wb): AppState,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
    body: Bytes,
) -> ApiResult<Json<Session>> {
    let format: ImportFormat = format_param(&params, "seed")?;
    Ok(Json(wb.import(&id, &body, format)?))
}

async fn expand_session(
    State(wb): AppState,
    Path(id): Path<String>,
    Json(body): Json<SessionExpandBody>,
) -> ApiResult<Json<Session>> {
    let session = tokio::task::spawn_blocking(move || wb.expand_session(&id, &body))
        .await
        .map_err(internal)??;
    Ok(Json(session))
}

#[derive(Deserialize)]
struct FeedbackBody {
    decisions: Vec<DecisionBody>,
}

async fn feedback(
    State(wb): AppState,
    Path(id): Path<String>,
    Json(body): Json<FeedbackBody>,
) -> ApiResult<Json<Session>> {
    Ok(Json(wb.feedback(&id, &body.decisions)?))
}

async fn export(
    State(wb): AppState,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let format: ExportFormat = format_param(&params, "csv")?;
    let bytes = wb.export(&id, format)?;
    let (content_type, ext) = match format {
        ExportFormat::Csv => ("text/csv; charset=utf-8", "csv"),
        ExportFormat::Json => ("application/json", "json"),
    };
    Ok((
        [
            (header::CONTENT_TYPE, content_type.to_owned()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"dictionary-{id}.{ext}\""),
            ),
        ],
        bytes,
    )
        .into_response())
}

async fn highlight(
    State(wb): AppState,
    Path(id): Path<String>,
    Json(body): Json<HighlightBody>,
) -> ApiResult<Response> {
    let content_type = match body.format {
        Some(RenderFormat::Html) => "text/html; charset=utf-8",
        _ => "application/json",
    };
    let bytes = wb.highlight(&id, &body)?;
    Ok(([(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

fn internal(err: tokio::task::JoinError) -> ApiError {
    ApiError::new(
        StatusCode::INTERNAL_SERVER_ERROR,
        "internal_error",
        err.to_string(),
    )
}
