//! JSON-over-HTTP service for hydra sessions and Goodstein traces.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use superbase_core::{goodstein, BaseSchedule, HeadPath, Hydra, HydraError, TraceRecord};
use tokio::net::TcpListener;
use tokio::sync::{Mutex, RwLock};

use crate::session::{GameSession, LiveSession, SessionError};

/// Largest step count accepted by the trace endpoint.
pub const MAX_TRACE_STEPS: u64 = 10_000;

type Shared = Arc<Mutex<LiveSession>>;

pub struct AppState {
    dir: PathBuf,
    sessions: RwLock<HashMap<String, Shared>>,
}

impl AppState {
    /// Loads every stored session from `dir`, creating it if needed.
    pub fn load(dir: &Path) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create state directory {}", dir.display()))?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let stored: GameSession = serde_json::from_str(&text)
                .with_context(|| format!("invalid session file {}", path.display()))?;
            let live = LiveSession::restore(stored).map_err(anyhow::Error::msg)?;
            sessions.insert(live.snapshot().id.clone(), Arc::new(Mutex::new(live)));
        }
        Ok(AppState {
            dir: dir.to_path_buf(),
            sessions: RwLock::new(sessions),
        })
    }

    fn file_for(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    /// Writes to a temporary file and renames it into place.
    async fn persist(&self, session: &GameSession) -> Result<(), ApiError> {
        let text = serde_json::to_string_pretty(session).map_err(ApiError::internal)?;
        let target = self.file_for(&session.id);
        let tmp = self.dir.join(format!(".{}.tmp", session.id));
        tokio::task::spawn_blocking(move || {
            std::fs::write(&tmp, text)?;
            std::fs::rename(&tmp, &target)
        })
        .await
        .map_err(ApiError::internal)?
        .map_err(ApiError::internal)
    }

    async fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", "unknown session"))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/hydra", post(create))
        .route("/api/hydra/{id}", get(fetch))
        .route("/api/hydra/{id}/chop", post(chop))
        .route("/api/hydra/{id}/history", get(history))
        .route("/api/goodstein", get(goodstein_trace))
        .with_state(state)
}

/// Binds, announces the address on stdout and serves until interrupted.
pub async fn serve(host: &str, port: u16, dir: &Path) -> anyhow::Result<()> {
    let state = Arc::new(AppState::load(dir)?);
    let listener = TcpListener::bind((host, port))
        .await
        .with_context(|| format!("cannot bind {host}:{port}"))?;
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.message, "code": self.code });
        (self.status, Json(body)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let message = e.to_string();
        let (status, code) = match &e {
            SessionError::Won => (StatusCode::CONFLICT, "game_won"),
            SessionError::Stale { .. } => (StatusCode::CONFLICT, "stale_move"),
            SessionError::Hydra(h) => match h {
                HydraError::NotAHead => (StatusCode::BAD_REQUEST, "not_a_head"),
                HydraError::InvalidPath { .. } => (StatusCode::BAD_REQUEST, "invalid_path"),
                HydraError::NoHeads => (StatusCode::CONFLICT, "game_won"),
                HydraError::TooLarge { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "too_large"),
                _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
            },
        };
        ApiError::new(status, code, message)
    }
}

/// Parses a JSON body, reporting malformed input as a 400 with an error body.
fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid body: {e}")))
}

#[derive(Deserialize)]
struct CreateRequest {
    tree: String,
}

#[derive(Deserialize)]
struct ChopRequest {
    path: HeadPath,
    #[serde(rename = "move")]
    expected_move: Option<u64>,
}

async fn create(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let hydra = Hydra::parse(&req.tree).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let id = format!("{:032x}", rand::rng().random::<u128>());
    let live = LiveSession::new(id.clone(), hydra);
    let snapshot = live.snapshot().clone();
    state.persist(&snapshot).await?;
    state
        .sessions
        .write()
        .await
        .insert(id, Arc::new(Mutex::new(live)));
    Ok((StatusCode::CREATED, Json(snapshot)).into_response())
}

async fn fetch(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<GameSession>, ApiError> {
    let session = state.get(&id).await?;
    let snapshot = session.lock().await.snapshot().clone();
    Ok(Json(snapshot))
}

async fn chop(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<GameSession>, ApiError> {
    let req: ChopRequest = parse_body(&body)?;
    let session = state.get(&id).await?;
    // Held across the write so that moves reach disk in order.
    let mut live = session.lock().await;
    let mut next = live.clone();
    next.chop(&req.path, req.expected_move)?;
    state.persist(next.snapshot()).await?;
    *live = next;
    Ok(Json(live.snapshot().clone()))
}

#[derive(Serialize)]
struct HistoryResponse<'a> {
    id: &'a str,
    history: &'a [superbase_core::MoveRecord],
}

async fn history(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Response, ApiError> {
    let session = state.get(&id).await?;
    let live = session.lock().await;
    let s = live.snapshot();
    Ok(Json(HistoryResponse {
        id: &s.id,
        history: &s.history,
    })
    .into_response())
}

#[derive(Deserialize)]
struct TraceQuery {
    seed: Option<String>,
    steps: Option<u64>,
    schedule: Option<String>,
}

#[derive(Serialize)]
struct TraceResponse {
    seed: String,
    schedule: String,
    terminated: bool,
    records: Vec<TraceRecord>,
}

async fn goodstein_trace(Query(q): Query<TraceQuery>) -> Result<Json<TraceResponse>, ApiError> {
    let seed_text = q.seed.ok_or_else(|| ApiError::bad_request("missing seed"))?;
    let seed: BigUint = seed_text
        .parse()
        .map_err(|_| ApiError::bad_request(format!("invalid seed '{seed_text}'")))?;
    let steps = q.steps.unwrap_or(20);
    if steps > MAX_TRACE_STEPS {
        return Err(ApiError::bad_request(format!(
            "steps must be at most {MAX_TRACE_STEPS}"
        )));
    }
    let schedule: BaseSchedule = match q.schedule {
        Some(s) => s.parse().map_err(|e| ApiError::bad_request(format!("{e}")))?,
        None => BaseSchedule::Classic,
    };
    let trace = tokio::task::spawn_blocking(move || goodstein::run(&seed, schedule, steps))
        .await
        .map_err(ApiError::internal)?
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "domain", e.to_string()))?;
    Ok(Json(TraceResponse {
        seed: seed_text,
        schedule: trace.schedule.to_string(),
        terminated: trace.terminated,
        records: trace.records(),
    }))
}
