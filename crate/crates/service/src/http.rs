//! HTTP/JSON endpoints over a shared [`Session`].
//!
//! | method | path              | body            | response         |
//! |--------|-------------------|-----------------|------------------|
//! | GET    | `/state`          |                 | `Snapshot`       |
//! | GET    | `/reports/{id}`   |                 | `RiskReport`     |
//! | POST   | `/what-if`        | `Overrides`     | `ReportDocument` |
//! | POST   | `/commit`         | `CommitRequest` | `HistoryEntry`   |
//! | GET    | `/history`        |                 | `HistoryResponse`|
//! | GET    | `/series/{id}`    |                 | `CompositionSeries` |
//!
//! Errors carry an [`ErrorBody`]. Reads take a shared lock; what-if and
//! commit are serialized by a writer mutex and compute off the lock, so
//! readers keep seeing the previous state until the new one is swapped in.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use riskcomp_core::composer::{CompositionSeries, RiskReport};
use riskcomp_core::scenario::ReportDocument;
use riskcomp_core::RiskError;
use serde::de::DeserializeOwned;
use tokio::net::TcpListener;
use tokio::sync::{Mutex, RwLock};

use crate::session::Session;
use crate::wire::{CommitRequest, ErrorBody, HistoryEntry, HistoryResponse, Overrides, Snapshot};

/// Shared server state. The session is `None` until one is installed.
#[derive(Debug, Default)]
pub struct AppState {
    session: RwLock<Option<Session>>,
    writer: Mutex<()>,
}

impl AppState {
    pub fn new(session: Session) -> Arc<Self> {
        Arc::new(AppState {
            session: RwLock::new(Some(session)),
            writer: Mutex::new(()),
        })
    }

    /// State with no session; every endpoint answers `uninitialized`.
    pub fn empty() -> Arc<Self> {
        Arc::new(AppState::default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    fn new(
        status: StatusCode,
        category: &str,
        field_path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                category: category.into(),
                field_path: field_path.into(),
                message: message.into(),
            },
        }
    }

    fn uninitialized() -> Self {
        ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "uninitialized",
            "",
            "no scenario is loaded",
        )
    }

    fn internal(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "runtime", "", message)
    }
}

impl From<RiskError> for ApiError {
    fn from(err: RiskError) -> Self {
        match err {
            RiskError::Validation { field, message } => ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "validation",
                field,
                message,
            ),
            RiskError::UnknownComposition(id) => ApiError::new(
                StatusCode::NOT_FOUND,
                "not_found",
                "composition_id",
                format!("unknown composition `{id}`"),
            ),
            RiskError::InsufficientData(m) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "insufficient_data", "", m)
            }
            other => ApiError::internal(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Strict JSON body: syntax errors are `parse`, shape errors `schema` with
/// the offending field path.
fn parse_body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            let path = if path == "." { String::new() } else { path };
            ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "schema",
                path,
                inner.to_string(),
            )
        } else {
            ApiError::new(StatusCode::BAD_REQUEST, "parse", "", inner.to_string())
        }
    })
}

async fn read<T>(
    state: &AppState,
    f: impl FnOnce(&Session) -> Result<T, ApiError>,
) -> Result<T, ApiError> {
    let guard = state.session.read().await;
    f(guard.as_ref().ok_or_else(ApiError::uninitialized)?)
}

/// Runs `f` on a copy of the session off the async runtime, then installs
/// the copy if `f` succeeded. Writers are serialized for a total order.
async fn write<T: Send + 'static>(
    state: &AppState,
    f: impl FnOnce(&mut Session) -> Result<T, RiskError> + Send + 'static,
) -> Result<T, ApiError> {
    let _writer = state.writer.lock().await;
    let mut working = state
        .session
        .read()
        .await
        .clone()
        .ok_or_else(ApiError::uninitialized)?;
    let (working, out) = tokio::task::spawn_blocking(move || {
        let out = f(&mut working);
        (working, out)
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?;
    let out = out?;
    *state.session.write().await = Some(working);
    Ok(out)
}

async fn get_state(State(state): State<Arc<AppState>>) -> ApiResult<Snapshot> {
    read(&state, |s| Ok(s.snapshot())).await.map(Json)
}

async fn get_report(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<RiskReport> {
    read(&state, |s| Ok(s.report(&id)?.clone())).await.map(Json)
}

async fn get_history(State(state): State<Arc<AppState>>) -> ApiResult<HistoryResponse> {
    read(&state, |s| {
        Ok(HistoryResponse {
            entries: s.history().to_vec(),
        })
    })
    .await
    .map(Json)
}

async fn get_series(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<CompositionSeries> {
    read(&state, |s| Ok(s.series(&id)?)).await.map(Json)
}

async fn post_what_if(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> ApiResult<ReportDocument> {
    let overrides: Overrides = parse_body(&body)?;
    write(&state, move |s| {
        let reports = s.what_if(&overrides)?.to_vec();
        Ok(ReportDocument::new(s.scenario().name.clone(), reports))
    })
    .await
    .map(Json)
}

async fn post_commit(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<HistoryEntry> {
    let req: CommitRequest = parse_body(&body)?;
    let entry = write(&state, move |s| s.commit(&req.composition_id, req.seed)).await?;
    tracing::info!(
        seq = entry.seq,
        composition = %entry.composition_id,
        seed = entry.seed,
        outcome = ?entry.outcome,
        "commit"
    );
    Ok(Json(entry))
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "", "no such endpoint")
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/state", get(get_state))
        .route("/reports/{id}", get(get_report))
        .route("/history", get(get_history))
        .route("/series/{id}", get(get_series))
        .route("/what-if", post(post_what_if))
        .route("/commit", post(post_commit))
        .fallback(not_found)
        .with_state(state)
}

/// Serves until the listener fails.
pub async fn serve(listener: TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    tracing::info!(addr = ?listener.local_addr().ok(), "listening");
    axum::serve(listener, router(state)).await
}
