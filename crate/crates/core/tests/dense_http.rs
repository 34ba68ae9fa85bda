//! Dense index built through a stubbed embedding endpoint.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;

use graphcot::graph::Graph;
use graphcot::retrieval::{DenseIndex, EmbeddingClient, IndexConfig, RetrievalError};

/// Embedding stub: answers every request with one deterministic vector per
/// input text (a cheap hash spread over 4 dimensions).
fn spawn_embedding_stub(connections: usize) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub");
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for _ in 0..connections {
            let (stream, _) = listener.accept().expect("accept");
            let mut reader = BufReader::new(stream);
            let mut content_length = 0usize;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).expect("header");
                if line.trim_end().is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    content_length = v.trim().parse().unwrap_or(0);
                }
            }
            let mut body = vec![0u8; content_length];
            reader.read_exact(&mut body).expect("body");
            let request: serde_json::Value = serde_json::from_slice(&body).unwrap();
            let inputs = request["input"].as_array().unwrap();
            let data: Vec<serde_json::Value> = inputs
                .iter()
                .map(|text| {
                    let vector = embed_text(text.as_str().unwrap());
                    serde_json::json!({ "embedding": vector })
                })
                .collect();
            let reply = serde_json::json!({ "data": data }).to_string();
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            )
            .expect("reply");
        }
    });
    format!("http://{addr}/v1/embeddings")
}

/// Deterministic toy embedding shared by the stub and the test oracle.
fn embed_text(text: &str) -> Vec<f64> {
    let mut vector = [0f64; 4];
    for (i, byte) in text.bytes().enumerate() {
        vector[i % 4] += f64::from(byte) * ((i % 7) as f64 + 1.0);
    }
    vector.to_vec()
}

fn fixture_graph() -> Graph {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/academic-demo");
    Graph::load_files(&dir.join("graph.json"), &dir.join("graph.manifest.json"), true)
        .unwrap()
        .0
}

#[test]
fn dense_index_builds_and_ranks_via_endpoint() {
    let url = spawn_embedding_stub(2);
    let client = EmbeddingClient::new(url, None, Some("toy-embedder".to_string()));
    let graph = fixture_graph();
    let cfg = IndexConfig::default_for(&graph);
    let index = DenseIndex::build(&graph, &cfg, &client).unwrap();
    assert_eq!(index.len(), 6);
    assert_eq!(index.dim(), 4);

    // querying a stored text embeds to the same vector: cosine 1 at rank 1
    let title = "Strongly Interacting Higgs Sector in the Minimal Standard Model";
    let hits = index.retrieve(title, 3, &client).unwrap();
    assert_eq!(hits[0].node.as_str(), "3101448248");
    assert!((hits[0].score - 1.0).abs() < 1e-6);
}

#[test]
fn unreachable_endpoint_is_an_error() {
    let client = EmbeddingClient::new("http://127.0.0.1:1/v1/embeddings", None, None);
    let graph = fixture_graph();
    let cfg = IndexConfig::default_for(&graph);
    assert!(matches!(
        DenseIndex::build(&graph, &cfg, &client),
        Err(RetrievalError::Endpoint(_))
    ));
}
