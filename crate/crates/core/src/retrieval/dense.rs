//! Dense retrieval backed by a remote embedding endpoint.
//!
//! Vectors are unit-normalized at ingest, so cosine similarity is a plain
//! dot product and all scores land in [-1, 1]. The scan is brute force,
//! which is exact and plenty fast at desk scale.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

use super::{rank_hits, IndexConfig, RetrievalError, RetrievalHit};

/// Client for an OpenAI-compatible embeddings endpoint:
/// `POST {"input": [text, ...]}` returning
/// `{"data": [{"embedding": [...]}, ...]}`.
#[derive(Debug, Clone)]
pub struct EmbeddingClient {
    url: String,
    api_key: Option<String>,
    model: Option<String>,
    http: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    input: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<&'a str>,
}

#[derive(Deserialize)]
struct EmbedResponse {
    data: Vec<EmbedDatum>,
}

#[derive(Deserialize)]
struct EmbedDatum {
    embedding: Vec<f64>,
}

impl EmbeddingClient {
    /// `api_key`, when set, is sent as a bearer token. Callers read it from
    /// the environment; it never appears in config files.
    pub fn new(url: impl Into<String>, api_key: Option<String>, model: Option<String>) -> Self {
        EmbeddingClient {
            url: url.into(),
            api_key,
            model,
            http: reqwest::blocking::Client::new(),
        }
    }

    pub fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, RetrievalError> {
        let body = EmbedRequest {
            input: texts,
            model: self.model.as_deref(),
        };
        let mut request = self.http.post(&self.url).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .map_err(|e| RetrievalError::Endpoint(e.to_string()))?;
        if !response.status().is_success() {
            return Err(RetrievalError::Endpoint(format!(
                "status {}",
                response.status()
            )));
        }
        let parsed: EmbedResponse = response
            .json()
            .map_err(|e| RetrievalError::Endpoint(e.to_string()))?;
        if parsed.data.len() != texts.len() {
            return Err(RetrievalError::Endpoint(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                parsed.data.len()
            )));
        }
        Ok(parsed.data.into_iter().map(|d| d.embedding).collect())
    }
}

/// Scale a vector to unit length; zero vectors stay zero.
pub fn unit_normalize(vector: &mut [f64]) {
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in vector.iter_mut() {
            *x /= norm;
        }
    }
}

/// Brute-force cosine index over node embeddings.
#[derive(Debug, Clone)]
pub struct DenseIndex {
    entries: Vec<(NodeId, Vec<f64>)>,
    dim: usize,
}

const EMBED_BATCH: usize = 64;

impl DenseIndex {
    /// Embed every node's searchable text through the endpoint and index
    /// the unit-normalized vectors. Nodes with empty text are skipped.
    pub fn build(
        graph: &Graph,
        cfg: &IndexConfig,
        client: &EmbeddingClient,
    ) -> Result<Self, RetrievalError> {
        cfg.validate(graph)?;
        let mut ids = Vec::new();
        let mut texts = Vec::new();
        for node in graph.nodes() {
            let text = cfg.searchable_text(node);
            if text.trim().is_empty() {
                continue;
            }
            ids.push(node.id.clone());
            texts.push(text);
        }
        let mut vectors = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(EMBED_BATCH) {
            vectors.extend(client.embed(chunk)?);
        }
        let entries = ids.into_iter().zip(vectors).collect();
        Self::from_embeddings(entries)
    }

    /// Build directly from (node, vector) pairs; vectors are normalized here.
    pub fn from_embeddings(
        mut entries: Vec<(NodeId, Vec<f64>)>,
    ) -> Result<Self, RetrievalError> {
        let dim = entries.first().map_or(0, |(_, v)| v.len());
        for (_, vector) in entries.iter_mut() {
            if vector.len() != dim {
                return Err(RetrievalError::DimensionMismatch {
                    index: dim,
                    got: vector.len(),
                });
            }
            unit_normalize(vector);
        }
        Ok(DenseIndex { entries, dim })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Top-`k` by cosine similarity against an already-embedded query.
    pub fn retrieve_with_vector(
        &self,
        query: &[f64],
        k: usize,
    ) -> Result<Vec<RetrievalHit>, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::ZeroK);
        }
        if self.entries.is_empty() {
            return Err(RetrievalError::EmptyIndex);
        }
        if query.len() != self.dim {
            return Err(RetrievalError::DimensionMismatch {
                index: self.dim,
                got: query.len(),
            });
        }
        let mut q = query.to_vec();
        unit_normalize(&mut q);
        let scored = self
            .entries
            .iter()
            .map(|(node, vector)| {
                let dot = vector.iter().zip(&q).map(|(a, b)| a * b).sum::<f64>();
                (node.clone(), dot)
            })
            .collect();
        Ok(rank_hits(scored, k))
    }

    /// Embed the query through the endpoint, then rank by cosine.
    pub fn retrieve(
        &self,
        query: &str,
        k: usize,
        client: &EmbeddingClient,
    ) -> Result<Vec<RetrievalHit>, RetrievalError> {
        let mut embedded = client.embed(&[query.to_string()])?;
        let vector = embedded.pop().ok_or_else(|| {
            RetrievalError::Endpoint("endpoint returned no embedding".to_string())
        })?;
        self.retrieve_with_vector(&vector, k)
    }
}
