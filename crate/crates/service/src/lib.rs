//! HTTP JSON API for interactive switching-game sessions.
//!
//! Sessions live in memory with least-recently-used eviction. Mutations of a
//! session take its write lock; reads, hints and oracle queries clone the
//! board under a read lock and compute outside it.

pub mod store;
pub mod wire;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gbg_core::board::{third_threshold, Configuration};
use gbg_core::format::parse_point_set;
use gbg_core::instances::{generate, GeneratorSpec};
use gbg_core::oracle::{exact_f, switch_code, DEFAULT_CAP};
use gbg_core::solvers::{solve, SolverKind};
use gbg_core::Error;
use serde_json::{json, Value};

use store::{Session, SessionRef, SessionStore};

#[derive(Debug, Clone, Copy)]
pub struct ServiceConfig {
    pub max_sessions: usize,
    /// Oracle queries are answered only for boards with at most this many points.
    pub oracle_cap: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_sessions: 256,
            oracle_cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone)]
struct AppState {
    store: Arc<SessionStore>,
    config: ServiceConfig,
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
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::Collinear => (StatusCode::UNPROCESSABLE_ENTITY, "collinear"),
            Error::Precondition(_) => (StatusCode::UNPROCESSABLE_ENTITY, "precondition"),
            Error::UnknownLine(_) => (StatusCode::CONFLICT, "unknown_line"),
            Error::Internal(_) | Error::NonOrdinaryEdge { .. } => {
                (StatusCode::SERVICE_UNAVAILABLE, "solver_failure")
            }
            _ => (StatusCode::BAD_REQUEST, "bad_instance"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "code": self.code, "message": self.message })),
        )
            .into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

pub fn router(config: ServiceConfig) -> Router {
    let state = AppState {
        store: Arc::new(SessionStore::new(config.max_sessions)),
        config,
    };
    Router::new()
        .route("/healthz", get(|| async { Json(json!({ "status": "ok" })) }))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/switch", post(apply_switch))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/hint", post(hint))
        .route("/sessions/{id}/oracle", get(oracle))
        .with_state(state)
}

/// Binds `addr` and serves until the process exits.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(config)).await
}

fn body_json(body: &Bytes) -> Result<Value, ApiError> {
    if body.is_empty() {
        return Ok(json!({}));
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON: {e}")))
}

fn lookup(state: &AppState, id: &str) -> Result<SessionRef, ApiError> {
    state
        .store
        .get(id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id:?}")))
}

fn weights_json(board: &Configuration) -> Value {
    Value::from(board.weights().iter().map(|&w| w as i64).collect::<Vec<_>>())
}

fn state_json(id: &str, session: &Session) -> Value {
    let board = &session.board;
    let inc = board.incidence();
    let n = board.n();
    let lines: Vec<Value> = inc
        .lines()
        .iter()
        .map(|l| json!({ "key": wire::key(&l.key), "points": l.points }))
        .collect();
    json!({
        "id": id,
        "n": n,
        "points": inc.points().iter().map(wire::point).collect::<Vec<_>>(),
        "weights": weights_json(board),
        "lines": lines,
        "discrepancy": board.discrepancy(),
        "collinear": inc.is_collinear(),
        "history": board.switch_log().iter().map(wire::key).collect::<Vec<_>>(),
        "bounds": { "third": third_threshold(n), "n_minus_2": n as i64 - 2 },
        "created_at": session.created_at,
    })
}

/// Builds a board from `{"spec": ...}`, `{"text": ...}` or `{"points": ..., "weights": ...}`.
fn board_from_request(req: &Value) -> Result<Configuration, ApiError> {
    if let Some(spec) = req.get("spec") {
        let spec: GeneratorSpec = spec
            .as_str()
            .ok_or_else(|| ApiError::bad_request("spec must be a key=value string"))?
            .parse()
            .map_err(|e: Error| ApiError::bad_request(e.to_string()))?;
        let inst = generate(&spec)?;
        return Ok(Configuration::new(inst.points, inst.weights)?);
    }
    if let Some(text) = req.get("text") {
        let text = text
            .as_str()
            .ok_or_else(|| ApiError::bad_request("text must be a string"))?;
        let (points, weights) = parse_point_set(text)?;
        return Ok(Configuration::new(points, weights)?);
    }
    let points = req
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| ApiError::bad_request("expected spec, text or points"))?
        .iter()
        .map(wire::parse_point)
        .collect::<Result<Vec<_>, _>>()
        .map_err(ApiError::bad_request)?;
    let weights = match req.get("weights") {
        None => vec![1; points.len()],
        Some(w) => w
            .as_array()
            .ok_or_else(|| ApiError::bad_request("weights must be an array"))?
            .iter()
            .enumerate()
            .map(|(i, v)| match v.as_i64() {
                Some(1) => Ok(1),
                Some(-1) => Ok(-1),
                _ => Err(ApiError::bad_request(format!("weight {i} must be 1 or -1, got {v}"))),
            })
            .collect::<Result<Vec<i8>, _>>()?,
    };
    Ok(Configuration::new(points, weights)?)
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<Value>), ApiError> {
    let req = body_json(&body)?;
    let board = board_from_request(&req)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let created_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let session = state.store.insert(id.clone(), Session { board, created_at });
    let view = state_json(&id, &*session.read().await);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let session = lookup(&state, &id)?;
    let guard = session.read().await;
    Ok(Json(state_json(&id, &guard)))
}

async fn apply_switch(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = lookup(&state, &id)?;
    let req = body_json(&body)?;
    let key = wire::parse_key(req.get("line").unwrap_or(&Value::Null)).map_err(ApiError::bad_request)?;
    let mut guard = session.write().await;
    let flipped = guard.board.switch(&key)?.to_vec();
    Ok(Json(json!({
        "line": wire::key(&key),
        "flipped": flipped,
        "discrepancy": guard.board.discrepancy(),
        "weights": weights_json(&guard.board),
    })))
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let session = lookup(&state, &id)?;
    let mut guard = session.write().await;
    let line = guard
        .board
        .undo()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "empty_history", "nothing to undo"))?;
    let board = &guard.board;
    Ok(Json(json!({
        "line": wire::key(&board.incidence().line(line).key),
        "flipped": board.incidence().line(line).points,
        "discrepancy": board.discrepancy(),
        "weights": weights_json(board),
    })))
}

async fn snapshot(session: &SessionRef) -> Configuration {
    session.read().await.board.rebased()
}

async fn hint(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = lookup(&state, &id)?;
    let req = body_json(&body)?;
    let kind: SolverKind = match req.get("solver") {
        None => SolverKind::Auto,
        Some(Value::String(s)) => s.parse().map_err(|e: Error| ApiError::bad_request(e.to_string()))?,
        Some(other) => return Err(ApiError::bad_request(format!("solver must be a string, got {other}"))),
    };
    let board = snapshot(&session).await;
    if board.weights().iter().all(|&w| w == 1) {
        return Ok(Json(json!({
            "solver": kind.as_str(),
            "next": null,
            "none_needed": true,
            "projected": board.n(),
            "bound": null,
            "switches": 0,
            "certificate": [],
        })));
    }
    let out = tokio::task::spawn_blocking(move || solve(&board, kind))
        .await
        .map_err(|e| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "solver_failure", e.to_string()))??;
    let certificate: Vec<Value> = out.certificate.switches.iter().map(wire::key).collect();
    Ok(Json(json!({
        "solver": kind.as_str(),
        "next": certificate.first().cloned(),
        "none_needed": certificate.is_empty(),
        "projected": out.final_discrepancy,
        "bound": out.certificate.kind.as_str(),
        "switches": certificate.len(),
        "certificate": certificate,
    })))
}

async fn oracle(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let session = lookup(&state, &id)?;
    let board = snapshot(&session).await;
    let n = board.n();
    let cap = state.config.oracle_cap;
    let skipped = json!({ "n": n, "cap": cap, "cap_exceeded": true, "value": null });
    if n > cap {
        return Ok(Json(skipped));
    }
    let result = tokio::task::spawn_blocking(move || {
        let code = switch_code(board.incidence())?;
        let r = exact_f(&code, board.weights(), cap)?;
        let witness: Vec<Value> = r
            .witness
            .iter()
            .map(|&li| wire::key(&board.incidence().line(li).key))
            .collect();
        Ok::<_, Error>((code.rank, r.value, witness))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "oracle_failure", e.to_string()))?;
    match result {
        Ok((rank, value, witness)) => Ok(Json(json!({
            "n": n,
            "cap": cap,
            "cap_exceeded": false,
            "value": value,
            "rank": rank,
            "witness": witness,
        }))),
        Err(Error::CapExceeded { .. }) => Ok(Json(skipped)),
        Err(e) => Err(e.into()),
    }
}
