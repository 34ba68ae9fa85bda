//! Read-only HTTP environment exposing the four graph functions, so
//! external agents can use a served graph the same way the built-in agent
//! does. Every response is JSON, including errors.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use graphcot::graph::{Graph, GraphError, NodeId};
use graphcot::retrieval::{Bm25Index, RetrievalError, RetrievalHit};

pub struct EnvState {
    pub graph: Graph,
    pub index: Bm25Index,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

struct EnvError {
    status: StatusCode,
    body: ErrorBody,
}

impl EnvError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        EnvError { status, body: ErrorBody { code, message: message.into() } }
    }
}

impl IntoResponse for EnvError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<GraphError> for EnvError {
    fn from(err: GraphError) -> Self {
        let (status, code) = match &err {
            GraphError::UnknownNode(_) => (StatusCode::NOT_FOUND, "unknown_node"),
            GraphError::UnknownFeature { .. } => (StatusCode::NOT_FOUND, "unknown_feature"),
            GraphError::UnknownEdgeType { .. } => (StatusCode::NOT_FOUND, "unknown_edge_type"),
            _ => (StatusCode::BAD_REQUEST, "bad_request"),
        };
        EnvError::new(status, code, err.to_string())
    }
}

impl From<RetrievalError> for EnvError {
    fn from(err: RetrievalError) -> Self {
        EnvError::new(StatusCode::BAD_REQUEST, "bad_request", err.to_string())
    }
}

fn parse_id(raw: &str) -> Result<NodeId, EnvError> {
    NodeId::new(raw).map_err(|_| {
        EnvError::new(StatusCode::NOT_FOUND, "unknown_node", format!("unknown node id `{raw}`"))
    })
}

pub fn router(state: Arc<EnvState>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/retrieve", post(retrieve))
        .route("/node/:id/feature/:name", get(node_feature))
        .route("/node/:id/neighbors/:edge_type", get(neighbors))
        .route("/node/:id/degree/:edge_type", get(degree))
        .with_state(state)
}

async fn healthz(State(state): State<Arc<EnvState>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "nodes": state.graph.node_count() }))
}

#[derive(Debug, Deserialize)]
struct RetrieveRequest {
    query: String,
    #[serde(default = "default_k")]
    k: usize,
}

fn default_k() -> usize {
    1
}

#[derive(Debug, Serialize)]
struct RetrieveResponse {
    hits: Vec<RetrievalHit>,
}

async fn retrieve(
    State(state): State<Arc<EnvState>>,
    body: Result<Json<RetrieveRequest>, JsonRejection>,
) -> Result<Json<RetrieveResponse>, EnvError> {
    let Json(request) = body.map_err(|e| {
        EnvError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string())
    })?;
    let hits = state.index.retrieve(&request.query, request.k)?;
    Ok(Json(RetrieveResponse { hits }))
}

async fn node_feature(
    State(state): State<Arc<EnvState>>,
    Path((id, name)): Path<(String, String)>,
) -> Result<Json<serde_json::Value>, EnvError> {
    let id = parse_id(&id)?;
    let value = state.graph.node_feature(&id, &name)?;
    Ok(Json(serde_json::json!({ "value": value })))
}

async fn neighbors(
    State(state): State<Arc<EnvState>>,
    Path((id, edge_type)): Path<(String, String)>,
) -> Result<Json<serde_json::Value>, EnvError> {
    let id = parse_id(&id)?;
    let list = state.graph.neighbor_check(&id, &edge_type)?;
    Ok(Json(serde_json::json!({ "neighbors": list })))
}

async fn degree(
    State(state): State<Arc<EnvState>>,
    Path((id, edge_type)): Path<(String, String)>,
) -> Result<Json<serde_json::Value>, EnvError> {
    let id = parse_id(&id)?;
    let degree = state.graph.node_degree(&id, &edge_type)?;
    Ok(Json(serde_json::json!({ "degree": degree })))
}

/// Serve the environment until the process is stopped.
pub async fn serve(state: Arc<EnvState>, bind: &str) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    log::info!("serving graph environment on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
