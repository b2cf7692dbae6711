//! HTTP JSON front end.

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::service::{Service, ServiceError};

#[derive(Deserialize)]
pub struct CreateBody {
    pub task: String,
}

#[derive(Deserialize)]
pub struct StepBody {
    pub input: String,
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
}

pub struct ApiError(ServiceError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.0.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let offset = match &self.0 {
            ServiceError::Parse(p) => Some(p.offset()),
            _ => None,
        };
        let body = ErrorBody { error: self.0.code(), message: self.0.to_string(), offset };
        (status, Json(body)).into_response()
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<Json<T>, ApiError> {
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map(Json).map_err(ApiError),
        Err(e) => Err(ApiError(ServiceError::Io(std::io::Error::other(e.to_string())))),
    }
}

async fn create(State(svc): State<Arc<Service>>, Json(body): Json<CreateBody>) -> Response {
    match blocking(move || svc.create_session(&body.task)).await {
        Ok(json) => (StatusCode::CREATED, json).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn step(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
    Json(body): Json<StepBody>,
) -> Result<impl IntoResponse, ApiError> {
    blocking(move || svc.post_step(&id, &body.input)).await
}

async fn hint(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    blocking(move || svc.get_hint(&id)).await
}

async fn summary(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    blocking(move || svc.summary(&id)).await
}

pub fn router(svc: Arc<Service>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(summary))
        .route("/sessions/{id}/steps", post(step))
        .route("/sessions/{id}/hint", get(hint))
        .with_state(svc)
}
