//! Endpoint behavior of the HTTP graph environment.

mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use tower::ServiceExt;

use common::fixture_dir;
use graphcot::graph::Graph;
use graphcot::retrieval::{Bm25Index, IndexConfig};
use graphcot_cli::service::{router, EnvState};

fn env_router() -> axum::Router {
    let (graph, _) = Graph::load_files(
        &fixture_dir().join("graph.json"),
        &fixture_dir().join("graph.manifest.json"),
        true,
    )
    .unwrap();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    router(Arc::new(EnvState { graph, index }))
}

async fn get(router: axum::Router, uri: &str) -> (StatusCode, serde_json::Value) {
    let response = router
        .oneshot(Request::builder().uri(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).expect("JSON body even on errors"))
}

async fn post(router: axum::Router, uri: &str, body: &str) -> (StatusCode, serde_json::Value) {
    let response = router
        .oneshot(
            Request::builder()
                .method("POST")
                .uri(uri)
                .header("content-type", "application/json")
                .body(Body::from(body.to_string()))
                .unwrap(),
        )
        .await
        .unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).expect("JSON body even on errors"))
}

#[tokio::test]
async fn healthz_reports_node_count() {
    let (status, body) = get(env_router(), "/healthz").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["nodes"], 6);
}

#[tokio::test]
async fn feature_lookup() {
    let (status, body) = get(env_router(), "/node/3101448248/feature/year").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["value"], "1993");
}

#[tokio::test]
async fn degree_lookup() {
    let (status, body) = get(env_router(), "/node/2090642949/degree/author").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["degree"], 2);
}

#[tokio::test]
async fn neighbors_lookup() {
    let (status, body) = get(env_router(), "/node/2090642949/neighbors/venue").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["neighbors"], serde_json::json!(["1980519", "1053242"]));
}

#[tokio::test]
async fn unknown_node_is_structured_404() {
    let (status, body) = get(env_router(), "/node/unknown9/feature/year").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown_node");
}

#[tokio::test]
async fn unknown_feature_and_edge_type_are_distinct() {
    let (status, body) = get(env_router(), "/node/3101448248/feature/price").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown_feature");

    let (status, body) = get(env_router(), "/node/2214159678/neighbors/venue").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown_edge_type");
}

#[tokio::test]
async fn retrieve_returns_ranked_hits() {
    let (status, body) = post(
        env_router(),
        "/retrieve",
        r#"{"query": "Strongly Interacting Higgs Sector in the Minimal Standard Model", "k": 2}"#,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["hits"][0]["node"], "3101448248");
    assert_eq!(body["hits"][0]["rank"], 1);
}

#[tokio::test]
async fn malformed_retrieve_body_is_structured_400() {
    let (status, body) = post(env_router(), "/retrieve", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "bad_request");

    let (status, body) = post(env_router(), "/retrieve", r#"{"query": "x", "k": 0}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "bad_request");
}

#[tokio::test]
async fn service_is_read_only() {
    let router = env_router();
    let before = get(router.clone(), "/healthz").await.1["nodes"].clone();
    let _ = post(
        router.clone(),
        "/retrieve",
        r#"{"query": "mass accretion rates", "k": 3}"#,
    )
    .await;
    let _ = get(router.clone(), "/node/3101448248/feature/year").await;
    let after = get(router, "/healthz").await.1["nodes"].clone();
    assert_eq!(before, after);
}
