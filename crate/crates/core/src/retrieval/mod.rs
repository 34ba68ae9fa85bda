//! Semantic node lookup.
//!
//! The default backend is a deterministic in-memory BM25 index over
//! per-node-type searchable fields. A dense backend driven by a remote
//! embedding endpoint is available as a drop-in for the same query surface.

mod bm25;
mod dense;

pub use bm25::Bm25Index;
pub use dense::{DenseIndex, EmbeddingClient};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FeatureValue, Graph, Node, NodeId};

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("index config references unknown feature `{feature}` for node type `{node_type}`")]
    UnknownField { node_type: String, feature: String },
    #[error("index config references unknown node type `{0}`")]
    UnknownNodeType(String),
    #[error("bm25 parameters out of range: k1 must be > 0 and 0 <= b <= 1")]
    BadParameters,
    #[error("k must be positive")]
    ZeroK,
    #[error("index is empty")]
    EmptyIndex,
    #[error("embedding dimension mismatch: index has {index}, got {got}")]
    DimensionMismatch { index: usize, got: usize },
    #[error("embedding endpoint error: {0}")]
    Endpoint(String),
}

/// Which features form the searchable document of each node type, plus the
/// BM25 parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConfig {
    /// node type -> ordered feature names whose concatenation is the document
    pub searchable_fields: BTreeMap<String, Vec<String>>,
    pub bm25_k1: f64,
    pub bm25_b: f64,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            searchable_fields: BTreeMap::new(),
            bm25_k1: 1.2,
            bm25_b: 0.75,
        }
    }
}

/// Fields tried in order when deriving a default config from a graph schema.
const DEFAULT_FIELD_PRIORITY: &[&str] = &[
    "title",
    "name",
    "plain_text",
    "case_name",
    "syllabus",
    "full_name",
];

impl IndexConfig {
    /// Derive searchable fields from the features observed on each node
    /// type: `title` for papers/books/items/series, `name` for authors and
    /// other named entities, `plain_text` for opinions, and so on.
    pub fn default_for(graph: &Graph) -> Self {
        let mut searchable_fields = BTreeMap::new();
        for node_type in graph.node_types() {
            let mut observed = std::collections::BTreeSet::new();
            for node in graph.nodes_of_type(node_type) {
                observed.extend(node.features.keys().cloned());
            }
            let fields: Vec<String> = DEFAULT_FIELD_PRIORITY
                .iter()
                .filter(|f| observed.contains(**f))
                .map(|f| f.to_string())
                .collect();
            if !fields.is_empty() {
                searchable_fields.insert(node_type.clone(), fields);
            }
        }
        IndexConfig {
            searchable_fields,
            ..IndexConfig::default()
        }
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), RetrievalError> {
        if self.bm25_k1 <= 0.0 || !(0.0..=1.0).contains(&self.bm25_b) {
            return Err(RetrievalError::BadParameters);
        }
        for (node_type, fields) in &self.searchable_fields {
            if !graph.node_types().contains(node_type) {
                return Err(RetrievalError::UnknownNodeType(node_type.clone()));
            }
            for field in fields {
                let known = graph
                    .nodes_of_type(node_type)
                    .any(|n| n.features.contains_key(field));
                if !known && graph.nodes_of_type(node_type).next().is_some() {
                    return Err(RetrievalError::UnknownField {
                        node_type: node_type.clone(),
                        feature: field.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The searchable text of one node under this config: the configured
    /// fields' values joined by single spaces, lists flattened.
    pub fn searchable_text(&self, node: &Node) -> String {
        let Some(fields) = self.searchable_fields.get(&node.node_type) else {
            return String::new();
        };
        let mut parts: Vec<&str> = Vec::new();
        for field in fields {
            match node.feature(field) {
                Some(FeatureValue::Text(s)) => parts.push(s),
                Some(FeatureValue::List(items)) => parts.extend(items.iter().map(String::as_str)),
                Some(FeatureValue::Number(_)) | None => {}
            }
        }
        parts.join(" ")
    }
}

/// One ranked search result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalHit {
    pub node: NodeId,
    pub score: f64,
    /// 1-based rank, dense (no gaps).
    pub rank: usize,
}

/// Lowercase and split on any non-alphanumeric run. No stemming, no
/// stopwords: reproducibility over recall.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Sort scored candidates into ranked hits: score descending, ties broken by
/// node id ascending, ranks assigned 1..=len.
pub(crate) fn rank_hits(mut scored: Vec<(NodeId, f64)>, k: usize) -> Vec<RetrievalHit> {
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (node, score))| RetrievalHit {
            node,
            score,
            rank: i + 1,
        })
        .collect()
}
