//! In-memory BM25 inverted index.
//!
//! Scoring uses the Lucene-style non-negative IDF:
//!
//! ```text
//! idf(t)      = ln(1 + (N - df + 0.5) / (df + 0.5))
//! score(D, Q) = sum over t in Q of idf(t) * tf * (k1 + 1) /
//!               (tf + k1 * (1 - b + b * |D| / avgdl))
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

use super::{rank_hits, tokenize, IndexConfig, RetrievalError, RetrievalHit};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Posting {
    doc: usize,
    term_freq: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DocEntry {
    node: NodeId,
    length: u32,
}

/// Deterministic BM25 index over the searchable text of every node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bm25Index {
    k1: f64,
    b: f64,
    docs: Vec<DocEntry>,
    /// term -> postings sorted by doc index
    postings: BTreeMap<String, Vec<Posting>>,
    avg_doc_len: f64,
    /// nodes whose searchable text was empty and were left out
    excluded: usize,
}

impl Bm25Index {
    /// Index every node whose searchable text under `cfg` is non-empty.
    /// Nodes are visited in id order, so the index is deterministic.
    pub fn build(graph: &Graph, cfg: &IndexConfig) -> Result<Self, RetrievalError> {
        cfg.validate(graph)?;
        let mut docs = Vec::new();
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut excluded = 0usize;
        let mut total_len = 0u64;

        for node in graph.nodes() {
            let text = cfg.searchable_text(node);
            let tokens = tokenize(&text);
            if tokens.is_empty() {
                excluded += 1;
                continue;
            }
            let doc = docs.len();
            total_len += tokens.len() as u64;
            docs.push(DocEntry {
                node: node.id.clone(),
                length: tokens.len() as u32,
            });
            let mut freqs: BTreeMap<String, u32> = BTreeMap::new();
            for token in tokens {
                *freqs.entry(token).or_insert(0) += 1;
            }
            for (term, term_freq) in freqs {
                postings.entry(term).or_default().push(Posting { doc, term_freq });
            }
        }

        let avg_doc_len = if docs.is_empty() {
            0.0
        } else {
            total_len as f64 / docs.len() as f64
        };
        Ok(Bm25Index {
            k1: cfg.bm25_k1,
            b: cfg.bm25_b,
            docs,
            postings,
            avg_doc_len,
            excluded,
        })
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    /// Nodes left out because their searchable text was empty.
    pub fn excluded_count(&self) -> usize {
        self.excluded
    }

    /// Document frequency of a (already normalized) term.
    pub fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    fn idf(&self, term: &str) -> f64 {
        let df = self.document_frequency(term) as f64;
        if df == 0.0 {
            return 0.0;
        }
        let n = self.docs.len() as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    /// Top-`k` nodes for a query, scores descending, ties broken by node id.
    /// Documents sharing no term with the query are not returned.
    pub fn retrieve(&self, query: &str, k: usize) -> Result<Vec<RetrievalHit>, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::ZeroK);
        }
        if self.docs.is_empty() {
            return Err(RetrievalError::EmptyIndex);
        }
        let mut scores: BTreeMap<usize, f64> = BTreeMap::new();
        for term in tokenize(query) {
            let idf = self.idf(&term);
            let Some(posts) = self.postings.get(&term) else {
                continue;
            };
            for post in posts {
                let doc = &self.docs[post.doc];
                let tf = post.term_freq as f64;
                let norm = self.k1
                    * (1.0 - self.b + self.b * doc.length as f64 / self.avg_doc_len);
                *scores.entry(post.doc).or_insert(0.0) += idf * tf * (self.k1 + 1.0) / (tf + norm);
            }
        }
        let scored: Vec<(NodeId, f64)> = scores
            .into_iter()
            .map(|(doc, score)| (self.docs[doc].node.clone(), score))
            .collect();
        Ok(rank_hits(scored, k))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("index serializes");
        out.push('\n');
        out
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }
}
