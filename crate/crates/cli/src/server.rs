//! In-memory session service. Each session sits behind its own lock, so
//! one session handles one request at a time while different sessions run
//! their pipelines concurrently on the blocking thread pool.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use vesseltrack::pipeline::{
    render_stage_png, trace_segment, ImageMetadata, PipelineConfig, PipelineError, SessionState,
    Stage,
};
use vesseltrack::raster::{load_image_bytes, Pixel};
use vesseltrack::tracking::TrackingError;

type SharedSession = Arc<tokio::sync::Mutex<SessionState>>;

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<String, SharedSession>>,
    next_id: AtomicU64,
}

impl AppState {
    fn session(&self, id: &str) -> Result<SharedSession, ApiError> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| {
                ApiError::new(
                    StatusCode::NOT_FOUND,
                    "SessionNotFound",
                    format!("no session {id:?}"),
                )
            })
    }
}

/// Error body `{error, stage?, message}`.
#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage: Option<String>,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            error: code.to_owned(),
            stage: None,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Config(_) => StatusCode::BAD_REQUEST,
            PipelineError::NotRun => StatusCode::CONFLICT,
            PipelineError::Artifact(_) => StatusCode::INTERNAL_SERVER_ERROR,
            PipelineError::Trace(TrackingError::NoPath { .. } | TrackingError::EmptyGraph) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            PipelineError::Trace(_) => StatusCode::BAD_REQUEST,
            PipelineError::Stage { .. } | PipelineError::Geometry(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
        };
        Self {
            status,
            error: e.code().to_owned(),
            stage: e.stage().map(|s| s.name().to_owned()),
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))
}

#[derive(Deserialize)]
struct CreateSession {
    /// Base64 PNG or PGM bytes.
    image: String,
    #[serde(default)]
    config: Option<serde_json::Value>,
    #[serde(default)]
    metadata: Option<ImageMetadata>,
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let request: CreateSession = parse_body(&body)?;
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(request.image.trim())
        .map_err(|e| ApiError::bad_request(format!("image is not valid base64: {e}")))?;
    let image = load_image_bytes(&bytes)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "InvalidImage", e.to_string()))?;
    let mut config = match request.config {
        Some(value) => PipelineConfig::from_json(&value.to_string())?,
        None => PipelineConfig::default(),
    };
    // the service keeps results in memory and never writes to its own disk
    config.output_dir = None;

    let id = format!("s{}", app.next_id.fetch_add(1, Ordering::Relaxed) + 1);
    let mut session = SessionState::new(id.clone(), image, config);
    session.metadata = request.metadata;
    app.sessions
        .lock()
        .expect("session table lock")
        .insert(id.clone(), Arc::new(tokio::sync::Mutex::new(session)));
    Ok((
        StatusCode::CREATED,
        Json(serde_json::json!({ "session_id": id })),
    )
        .into_response())
}

async fn run_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let mut session = app.session(&id)?.lock_owned().await;
    let summary = blocking(move || session.run().map(|r| r.summary())).await??;
    Ok(Json(summary).into_response())
}

async fn stage_png(
    State(app): State<Arc<AppState>>,
    Path((id, file)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let not_found = || {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "UnknownStage",
            format!("no stage raster {file:?}"),
        )
    };
    let stage = file
        .strip_suffix(".png")
        .and_then(Stage::from_name)
        .ok_or_else(not_found)?;
    let session = app.session(&id)?.lock_owned().await;
    let png = blocking(move || {
        session
            .result
            .as_ref()
            .map(|result| render_stage_png(result, stage))
            .ok_or(PipelineError::NotRun)
    })
    .await??;
    Ok(([(header::CONTENT_TYPE, "image/png")], png).into_response())
}

#[derive(Deserialize)]
struct TraceRequest {
    start: [i64; 2],
    end: [i64; 2],
}

fn to_pixel(p: [i64; 2]) -> Result<Pixel, ApiError> {
    match (usize::try_from(p[0]), usize::try_from(p[1])) {
        (Ok(x), Ok(y)) => Ok(Pixel::new(x, y)),
        _ => Err(ApiError::bad_request(format!(
            "click {p:?} has a negative coordinate"
        ))),
    }
}

async fn trace(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let request: TraceRequest = parse_body(&body)?;
    let (start, end) = (to_pixel(request.start)?, to_pixel(request.end)?);
    let mut session = app.session(&id)?.lock_owned().await;
    let record = blocking(move || trace_segment(&mut session, start, end)).await??;
    Ok(Json(record).into_response())
}

async fn segments(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let session = app.session(&id)?;
    let session = session.lock().await;
    Ok(Json(&session.segments).into_response())
}

async fn delete_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    app.session(&id)?;
    app.sessions.lock().expect("session table lock").remove(&id);
    Ok(StatusCode::NO_CONTENT)
}

/// All routes over a fresh, empty session store.
pub fn router() -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", axum::routing::delete(delete_session))
        .route("/sessions/{id}/run", post(run_session))
        .route("/sessions/{id}/stage/{file}", get(stage_png))
        .route("/sessions/{id}/trace", post(trace))
        .route("/sessions/{id}/segments", get(segments))
        .layer(DefaultBodyLimit::max(64 * 1024 * 1024))
        .layer(CorsLayer::permissive())
        .with_state(Arc::new(AppState::default()))
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
