use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ontosearch_core::cost::{self, CurveRow};
use ontosearch_core::ontology::{InstanceRecord, KnowledgeBase, PropertyDef};
use ontosearch_core::query::QueryResponse;
use ontosearch_core::{Name, QueryError, SearchEngine};
use serde::{Deserialize, Serialize};
use serde_json::json;

pub type Shared = Arc<SearchEngine>;

/// Routes of the JSON API, without static file serving.
pub fn api_routes(engine: Shared) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/query", post(query))
        .route("/api/ontology", get(ontology))
        .route("/api/classes/{name}/instances", get(class_instances))
        .route("/api/instances/{name}", get(instance))
        .route("/api/perf", get(perf))
        .with_state(engine)
}

/// A JSON error body `{"error": {"code", "message", "detail"?}}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    detail: Option<serde_json::Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            detail: None,
        }
    }

    fn unknown(what: &str, name: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_name",
            format!("unknown {what} {name:?}"),
        )
    }
}

impl From<QueryError> for ApiError {
    fn from(err: QueryError) -> Self {
        let status = match err {
            QueryError::MalformedQuery { .. } => StatusCode::BAD_REQUEST,
            QueryError::NoRelation { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            QueryError::EmptyResult { .. } | QueryError::Unknown(_) => StatusCode::NOT_FOUND,
        };
        let detail = match &err {
            QueryError::NoRelation {
                instance,
                class,
                forward,
                inverse,
            } => Some(json!({
                "instance": instance,
                "class": class,
                "forward": forward,
                "inverse": inverse,
            })),
            QueryError::EmptyResult {
                mode,
                instance,
                class,
                properties,
                trace,
            } => Some(json!({
                "mode": mode,
                "instance": instance,
                "class": class,
                "properties": properties,
                "trace": trace,
            })),
            _ => None,
        };
        ApiError {
            status,
            code: err.code(),
            message: err.to_string(),
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(detail) = self.detail {
            error["detail"] = detail;
        }
        (self.status, Json(json!({ "error": error }))).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", r.body_text())
    }
}

pub async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Deserialize)]
struct QueryRequest {
    q: String,
}

async fn query(
    State(engine): State<Shared>,
    body: Result<Json<QueryRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = body?;
    let extraction = engine.extract(&req.q);
    match engine.resolve(&extraction) {
        Ok(answer) => {
            tracing::debug!(q = %req.q, mode = ?answer.mode, "answered");
            Ok(Json(QueryResponse::new(&req.q, &extraction, &answer)).into_response())
        }
        Err(err) => {
            tracing::debug!(q = %req.q, code = err.code(), "query failed");
            Err(err.into())
        }
    }
}

#[derive(Serialize)]
struct ClassNode<'a> {
    name: &'a Name,
    instances: Vec<&'a Name>,
    subclasses: Vec<ClassNode<'a>>,
}

fn class_node<'a>(kb: &'a KnowledgeBase, name: &'a Name) -> ClassNode<'a> {
    ClassNode {
        name,
        instances: kb.direct_instances(name).collect(),
        subclasses: kb.children(name).map(|c| class_node(kb, c)).collect(),
    }
}

#[derive(Serialize)]
struct Ontology<'a> {
    forest: Vec<ClassNode<'a>>,
    properties: Vec<&'a PropertyDef>,
    instances: Vec<&'a InstanceRecord>,
}

async fn ontology(State(engine): State<Shared>) -> Response {
    let kb = engine.kb();
    Json(Ontology {
        forest: kb.roots().map(|r| class_node(kb, r)).collect(),
        properties: kb.properties().collect(),
        instances: kb.instances().collect(),
    })
    .into_response()
}

fn lookup_name(kind: &str, raw: &str) -> Result<Name, ApiError> {
    Name::new(raw).map_err(|_| ApiError::unknown(kind, raw))
}

async fn class_instances(
    State(engine): State<Shared>,
    Path(raw): Path<String>,
) -> Result<Response, ApiError> {
    let kb = engine.kb();
    let name = lookup_name("class", &raw)?;
    let class = kb
        .class(&name)
        .ok_or_else(|| ApiError::unknown("class", &raw))?;
    let all = kb
        .subtree_instances(class)
        .map_err(|_| ApiError::unknown("class", &raw))?;
    Ok(Json(json!({
        "class": class,
        "ancestors": kb.ancestors(class).unwrap_or_default(),
        "direct": kb.direct_instances(class).collect::<Vec<_>>(),
        "instances": all,
    }))
    .into_response())
}

async fn instance(
    State(engine): State<Shared>,
    Path(raw): Path<String>,
) -> Result<Response, ApiError> {
    let kb = engine.kb();
    let name = lookup_name("instance", &raw)?;
    let rec = kb
        .instance(&name)
        .ok_or_else(|| ApiError::unknown("instance", &raw))?;
    Ok(Json(json!({
        "id": rec.id,
        "class": rec.class,
        "ancestors": kb.ancestors(&rec.class).unwrap_or_default(),
        "assertions": rec.assertions,
    }))
    .into_response())
}

#[derive(Deserialize)]
struct PerfParams {
    #[serde(default = "default_r")]
    r: f64,
    #[serde(default = "default_n_min")]
    n_min: f64,
    #[serde(default = "default_n_max")]
    n_max: f64,
    #[serde(default = "default_steps")]
    steps: usize,
}

fn default_r() -> f64 {
    50.0
}
fn default_n_min() -> f64 {
    10.0
}
fn default_n_max() -> f64 {
    1e6
}
fn default_steps() -> usize {
    6
}

/// Largest curve the endpoint will compute.
const MAX_STEPS: usize = 10_000;

async fn perf(
    params: Result<Query<PerfParams>, QueryRejection>,
) -> Result<Json<Vec<CurveRow>>, ApiError> {
    let Query(p) = params?;
    if p.steps > MAX_STEPS {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "bad_request",
            format!("steps must be at most {MAX_STEPS}"),
        ));
    }
    cost::emit_curves(p.n_min, p.n_max, p.steps, p.r)
        .map(Json)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))
}
