//! JSON-over-HTTP service: discovery, mode weights, health.
//!
//! Every request runs an isolated pipeline over the shared, immutable
//! corpus. The only shared mutable state is the mode-weight table, which is
//! replaced wholesale on each override.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusFilter, PaperRecord};
use crate::error::Error;
use crate::intent::{QueryIntent, SearchSpec};
use crate::pipeline::{Engine, PipelineConfig, PipelineStructure, SourceMode, DEFAULT_MAX_RESULTS};
use crate::retrieval::RetrievalMethod;
use crate::scoring::{ModeWeights, SearchMode};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscoverRequest {
    pub query: String,
    #[serde(default)]
    pub mode: Option<SearchMode>,
    #[serde(default)]
    pub weights: Option<ModeWeights>,
    #[serde(default)]
    pub max_results: Option<usize>,
    #[serde(default)]
    pub search_mode: Option<SourceMode>,
    #[serde(default)]
    pub structure: Option<PipelineStructure>,
    #[serde(default)]
    pub retrieval: Option<RetrievalMethod>,
    #[serde(default)]
    pub filter: Option<CorpusFilter>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoverResponse {
    pub query: String,
    pub mode: SearchMode,
    /// Weights the combined scores were computed with.
    pub weights: ModeWeights,
    pub intent: Option<QueryIntent>,
    pub search_spec: Option<SearchSpec>,
    pub papers: Vec<PaperRecord>,
    pub insights: Vec<String>,
    pub hidden_gems: Vec<PaperRecord>,
    pub canonical_papers: Vec<PaperRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub mode: SearchMode,
    pub weights: ModeWeights,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModesResponse {
    pub modes: Vec<ModeEntry>,
}

pub type ModeTable = BTreeMap<SearchMode, ModeWeights>;

pub fn default_mode_table() -> ModeTable {
    SearchMode::ALL.iter().map(|&m| (m, m.weights())).collect()
}

pub struct AppState {
    engine: Arc<Engine>,
    modes: RwLock<Arc<ModeTable>>,
    output_dir: Option<PathBuf>,
    request_counter: AtomicU64,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, output_dir: Option<PathBuf>) -> Self {
        Self {
            engine,
            modes: RwLock::new(Arc::new(default_mode_table())),
            output_dir,
            request_counter: AtomicU64::new(0),
        }
    }

    pub fn modes(&self) -> Arc<ModeTable> {
        self.modes.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn set_mode(&self, mode: SearchMode, weights: ModeWeights) {
        let mut guard = self.modes.write().unwrap_or_else(|e| e.into_inner());
        let mut next = (**guard).clone();
        next.insert(mode, weights);
        *guard = Arc::new(next);
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

/// Parses a JSON body, reporting the failing field path on error.
fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    let mut de = serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path == "." {
            format!("invalid request body: {inner}")
        } else {
            format!("invalid field `{path}`: {inner}")
        };
        ApiError::new(StatusCode::BAD_REQUEST, message)
    })
}

fn modes_response(table: &ModeTable) -> ModesResponse {
    ModesResponse {
        modes: table
            .iter()
            .map(|(&mode, &weights)| ModeEntry {
                mode,
                weights,
                lambda: mode.lambda(),
            })
            .collect(),
    }
}

async fn health(State(app): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "papers": app.engine.corpus().len() }))
}

async fn get_modes(State(app): State<Arc<AppState>>) -> Json<ModesResponse> {
    Json(modes_response(&app.modes()))
}

async fn put_mode(
    State(app): State<Arc<AppState>>,
    Path(mode): Path<String>,
    body: Bytes,
) -> Result<Json<ModeEntry>, ApiError> {
    let mode: SearchMode = mode
        .parse()
        .map_err(|e: Error| ApiError::new(StatusCode::NOT_FOUND, e.to_string()))?;
    let weights: ModeWeights = parse_body(&body)?;
    weights
        .validate()
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    app.set_mode(mode, weights);
    Ok(Json(ModeEntry {
        mode,
        weights,
        lambda: mode.lambda(),
    }))
}

/// Maps a request onto a pipeline config using the current mode table.
pub fn request_config(req: &DiscoverRequest, modes: &ModeTable) -> PipelineConfig {
    PipelineConfig {
        structure: req.structure.unwrap_or_default(),
        mode: req.mode,
        retrieval: req.retrieval.unwrap_or_default(),
        search_mode: req.search_mode,
        filter: req.filter.clone().unwrap_or_default(),
        max_results: req.max_results.unwrap_or(DEFAULT_MAX_RESULTS),
        weights: req.weights,
        mode_weights: modes.clone(),
        seed: 0,
        target: None,
    }
}

async fn discover(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Json<DiscoverResponse>, ApiError> {
    let req: DiscoverRequest = parse_body(&body)?;
    if req.max_results == Some(0) {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "max_results must be at least 1",
        ));
    }
    if let Some(w) = &req.weights {
        w.validate()
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    }
    let config = request_config(&req, &app.modes());
    let out_dir = app.output_dir.as_ref().map(|d| {
        let n = app.request_counter.fetch_add(1, Ordering::Relaxed);
        d.join("requests").join(format!("{n:06}"))
    });
    let engine = app.engine.clone();
    let query = req.query.clone();
    let state = tokio::task::spawn_blocking(move || engine.run(&query, config, out_dir.as_deref()))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| match e {
            Error::InvalidWeights(_) | Error::InvalidFilter(_) | Error::Config(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
            }
            other => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, other.to_string()),
        })?;
    let mut papers = state.papers;
    papers.truncate(state.config.max_results);
    Ok(Json(DiscoverResponse {
        query: state.query,
        mode: state.resolved_mode,
        weights: state.config.weights_for(state.resolved_mode),
        intent: state.intent,
        search_spec: state.search_spec,
        papers,
        insights: state.insights,
        hidden_gems: state.hidden_gems,
        canonical_papers: state.canonical_papers,
        warnings: state.warnings,
    }))
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/discover", post(discover))
        .route("/v1/modes", get(get_modes))
        .route("/v1/modes/{mode}", put(put_mode))
        .route("/v1/health", get(health))
        .with_state(app)
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, app: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app)).await
}
