//! JSON-over-HTTP access to Mapper and persistence on preloaded datasets.
//!
//! `GET /datasets`, `GET /lenses`, `POST /mapper`, `POST /diagram`. Bad
//! requests get 400 with `{"errors": [{"field", "message"}]}`, unknown
//! datasets 404.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::mapper::Clustering;
use crate::pipeline::{diagram_file, lens_catalog, run_mapper, Dataset, FiltrationSpec};

type Datasets = Arc<BTreeMap<String, Dataset>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

fn field_error(field: &str, message: impl Into<String>) -> FieldError {
    FieldError { field: field.into(), message: message.into() }
}

fn reply(status: StatusCode, errors: Vec<FieldError>) -> Response {
    (status, Json(json!({ "errors": errors }))).into_response()
}

fn from_error(e: Error) -> Response {
    if e.is_validation() {
        let field = e.field().unwrap_or("params").to_string();
        reply(StatusCode::BAD_REQUEST, vec![field_error(&field, e.to_string())])
    } else {
        reply(StatusCode::UNPROCESSABLE_ENTITY, vec![field_error("computation", e.to_string())])
    }
}

pub fn router(datasets: BTreeMap<String, Dataset>) -> Router {
    Router::new()
        .route("/datasets", get(list_datasets))
        .route("/lenses", get(list_lenses))
        .route("/mapper", post(mapper))
        .route("/diagram", post(diagram))
        .with_state(Arc::new(datasets))
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, datasets: BTreeMap<String, Dataset>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(datasets)).await
}

async fn list_datasets(State(ds): State<Datasets>) -> Json<Value> {
    Json(Value::Array(
        ds.iter()
            .map(|(id, d)| json!({ "id": id, "kind": d.kind(), "size": d.size() }))
            .collect(),
    ))
}

async fn list_lenses() -> Json<Value> {
    Json(lens_catalog())
}

fn parse_object(body: &Bytes) -> Result<Map<String, Value>, FieldError> {
    match serde_json::from_slice::<Value>(body) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(field_error("body", "expected a JSON object")),
        Err(e) => Err(field_error("body", e.to_string())),
    }
}

fn unknown_keys(body: &Map<String, Value>, allowed: &[&str], errors: &mut Vec<FieldError>) {
    for k in body.keys().filter(|k| !allowed.contains(&k.as_str())) {
        errors.push(field_error(k, "unknown field"));
    }
}

fn dataset_field(body: &Map<String, Value>, errors: &mut Vec<FieldError>) -> Option<String> {
    match body.get("dataset") {
        Some(Value::String(s)) => Some(s.clone()),
        _ => {
            errors.push(field_error("dataset", "required string"));
            None
        }
    }
}

fn check_clustering(c: &Clustering) -> Option<FieldError> {
    let bad = |m: &str| Some(field_error("clustering", m));
    match *c {
        Clustering::SingleLinkage { eps } | Clustering::Dbscan { eps, .. } if !(eps >= 0.0) => bad("eps must be non-negative"),
        Clustering::Dbscan { min_pts: 0, .. } => bad("min_pts must be at least 1"),
        Clustering::KMeans { k: 0 } => bad("k must be at least 1"),
        _ => None,
    }
}

async fn mapper(State(ds): State<Datasets>, body: Bytes) -> Response {
    let body = match parse_object(&body) {
        Ok(b) => b,
        Err(e) => return reply(StatusCode::BAD_REQUEST, vec![e]),
    };
    let mut errors = Vec::new();
    unknown_keys(&body, &["dataset", "lens", "resolution", "overlap", "clustering"], &mut errors);
    let dataset = dataset_field(&body, &mut errors);
    let resolution = match body.get("resolution").and_then(Value::as_u64) {
        Some(n) if n >= 1 => n as usize,
        _ => {
            errors.push(field_error("resolution", "must be an integer ≥ 1"));
            0
        }
    };
    let overlap = match body.get("overlap").and_then(Value::as_f64) {
        Some(g) if (0.0..1.0).contains(&g) => g,
        Some(g) => {
            errors.push(field_error("overlap", format!("must lie in [0, 1), got {g}")));
            0.0
        }
        None => {
            errors.push(field_error("overlap", "required number in [0, 1)"));
            0.0
        }
    };
    let lens = match body.get("lens") {
        Some(l @ Value::Object(_)) => l.clone(),
        _ => {
            errors.push(field_error("lens", "required object with a `kind`"));
            Value::Null
        }
    };
    let clustering = match body.get("clustering") {
        None | Some(Value::Null) => None,
        Some(c) => match serde_json::from_value::<Clustering>(c.clone()) {
            Ok(c) => {
                errors.extend(check_clustering(&c));
                Some(c)
            }
            Err(e) => {
                errors.push(field_error("clustering", e.to_string()));
                None
            }
        },
    };
    if !errors.is_empty() {
        return reply(StatusCode::BAD_REQUEST, errors);
    }
    let id = dataset.unwrap_or_default();
    if !ds.contains_key(&id) {
        return reply(StatusCode::NOT_FOUND, vec![field_error("dataset", format!("unknown dataset `{id}`"))]);
    }
    let result = tokio::task::spawn_blocking(move || {
        run_mapper(&ds[&id], &lens, resolution, overlap, clustering.as_ref()).map(|mut g| {
            g.params.dataset = Some(id);
            g
        })
    })
    .await;
    match result {
        Ok(Ok(g)) => Json(g).into_response(),
        Ok(Err(e)) => from_error(e),
        Err(e) => reply(StatusCode::INTERNAL_SERVER_ERROR, vec![field_error("computation", e.to_string())]),
    }
}

async fn diagram(State(ds): State<Datasets>, body: Bytes) -> Response {
    let body = match parse_object(&body) {
        Ok(b) => b,
        Err(e) => return reply(StatusCode::BAD_REQUEST, vec![e]),
    };
    let mut errors = Vec::new();
    unknown_keys(&body, &["dataset", "filtration"], &mut errors);
    let dataset = dataset_field(&body, &mut errors);
    let spec = match body.get("filtration").map(|f| serde_json::from_value::<FiltrationSpec>(f.clone())) {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) => {
            errors.push(field_error("filtration", e.to_string()));
            None
        }
        None => {
            errors.push(field_error("filtration", "required object with a `type`"));
            None
        }
    };
    if !errors.is_empty() {
        return reply(StatusCode::BAD_REQUEST, errors);
    }
    let (id, spec) = (dataset.unwrap_or_default(), spec.expect("checked above"));
    if !ds.contains_key(&id) {
        return reply(StatusCode::NOT_FOUND, vec![field_error("dataset", format!("unknown dataset `{id}`"))]);
    }
    let result = tokio::task::spawn_blocking(move || diagram_file(&ds[&id], &spec, &id)).await;
    match result {
        Ok(Ok(file)) => Json(file).into_response(),
        Ok(Err(e)) => from_error(e),
        Err(e) => reply(StatusCode::INTERNAL_SERVER_ERROR, vec![field_error("computation", e.to_string())]),
    }
}
