//! Non-agentic baselines sharing the agent's backends and retriever:
//! a bare LLM, text RAG over retrieved nodes, and graph RAG over linearized
//! k-hop ego-graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EgoGraph, Graph, GraphError};
use crate::llm::{ChatBackend, ChatMessage, GenerationConfig, LlmError};
use crate::retrieval::{Bm25Index, RetrievalError};
use crate::token;

/// Identifier of the subgraph serialization scheme used by [`linearize`].
pub const LINEARIZE_STYLE: &str = "records-v1";

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Settings for the RAG baselines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RagConfig {
    /// Retrieved seed nodes per question.
    pub k_docs: usize,
    /// Ego-graph radius; 0 means node-only retrieval.
    pub hops: usize,
    /// Cap on the assembled context, in approximate tokens.
    pub context_token_budget: usize,
    /// Cap on ego-graph size before linearization.
    pub node_cap: usize,
    pub linearize_style: String,
}

impl Default for RagConfig {
    fn default() -> Self {
        RagConfig {
            k_docs: 1,
            hops: 1,
            context_token_budget: 4096,
            node_cap: 500,
            linearize_style: LINEARIZE_STYLE.to_string(),
        }
    }
}

/// What a baseline produced, with enough context accounting for the run log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineOutput {
    pub prediction: String,
    pub context_tokens: usize,
    pub context_truncated: bool,
}

/// Plain prompting: simple instructions, no external context at all.
pub fn base_llm_answer(
    question: &str,
    backend: &dyn ChatBackend,
    generation: &GenerationConfig,
) -> Result<String, LlmError> {
    let messages = base_llm_prompt(question);
    Ok(backend.complete(&messages, generation)?.text)
}

pub fn base_llm_prompt(question: &str) -> Vec<ChatMessage> {
    vec![ChatMessage::user(format!(
        "Answer the following question.\n\nQuestion: {question}\n\nAnswer:"
    ))]
}

/// Retrieve `k_docs` nodes and use their textual records as context.
pub fn text_rag_answer(
    question: &str,
    graph: &Graph,
    index: &Bm25Index,
    backend: &dyn ChatBackend,
    cfg: &RagConfig,
    generation: &GenerationConfig,
) -> Result<BaselineOutput, BaselineError> {
    answer_with_hops(question, graph, index, backend, cfg, generation, 0)
}

/// Retrieve seeds, expand each into a `hops`-radius ego-graph, linearize,
/// and use the concatenation as context.
pub fn graph_rag_answer(
    question: &str,
    graph: &Graph,
    index: &Bm25Index,
    backend: &dyn ChatBackend,
    cfg: &RagConfig,
    generation: &GenerationConfig,
) -> Result<BaselineOutput, BaselineError> {
    answer_with_hops(question, graph, index, backend, cfg, generation, cfg.hops)
}

fn answer_with_hops(
    question: &str,
    graph: &Graph,
    index: &Bm25Index,
    backend: &dyn ChatBackend,
    cfg: &RagConfig,
    generation: &GenerationConfig,
    hops: usize,
) -> Result<BaselineOutput, BaselineError> {
    let (context, truncated) = rag_context(question, graph, index, cfg, hops)?;
    let messages = rag_prompt(question, &context);
    let prediction = backend.complete(&messages, generation)?.text;
    if truncated {
        log::info!("rag context truncated to {} tokens", cfg.context_token_budget);
    }
    Ok(BaselineOutput {
        prediction,
        context_tokens: token::count(&context),
        context_truncated: truncated,
    })
}

/// The context string a RAG baseline would feed the LLM, before prompting.
pub fn rag_context(
    question: &str,
    graph: &Graph,
    index: &Bm25Index,
    cfg: &RagConfig,
    hops: usize,
) -> Result<(String, bool), BaselineError> {
    let seeds = index.retrieve(question, cfg.k_docs)?;
    let mut records = Vec::new();
    for hit in &seeds {
        let ego = graph.ego_graph(&hit.node, hops, cfg.node_cap)?;
        records.extend(subgraph_records(&ego, graph));
    }
    Ok(truncate_records(records, cfg.context_token_budget))
}

pub fn rag_prompt(question: &str, context: &str) -> Vec<ChatMessage> {
    vec![ChatMessage::user(format!(
        "Answer the following question based on the context.\n\nContext:\n{context}\n\n\
         Question: {question}\n\nAnswer:"
    ))]
}

/// Serialize an ego-graph into a text sequence: one record per node in BFS
/// order, then one record per edge between included nodes. Whole trailing
/// records are dropped when the token budget is hit, never a partial one.
pub fn linearize(ego: &EgoGraph, graph: &Graph, budget: usize) -> String {
    let (text, _) = truncate_records(subgraph_records(ego, graph), budget);
    text
}

fn subgraph_records(ego: &EgoGraph, graph: &Graph) -> Vec<String> {
    let included: std::collections::HashSet<&crate::graph::NodeId> = ego.nodes.iter().collect();
    let mut records = Vec::new();
    for id in &ego.nodes {
        let Some(node) = graph.node(id) else { continue };
        let fields: Vec<String> = node
            .features
            .iter()
            .map(|(name, value)| format!("{name}: {}", value.display()))
            .collect();
        if fields.is_empty() {
            records.push(format!("({} {})", node.node_type, id));
        } else {
            records.push(format!("({} {}) {}", node.node_type, id, fields.join("; ")));
        }
    }
    for id in &ego.nodes {
        let Some(node) = graph.node(id) else { continue };
        for (edge_type, targets) in &node.neighbors {
            for target in targets {
                if included.contains(target) {
                    records.push(format!("({id}) -{edge_type}-> ({target})"));
                }
            }
        }
    }
    if ego.truncated {
        records.push("(subgraph truncated)".to_string());
    }
    records
}

/// Keep whole records up to `budget` tokens. An oversized first record is
/// cut at a token boundary rather than returning an empty context.
fn truncate_records(records: Vec<String>, budget: usize) -> (String, bool) {
    let mut kept = Vec::new();
    let mut used = 0usize;
    let mut truncated = false;
    for record in records {
        let cost = token::count(&record);
        if used + cost > budget {
            truncated = true;
            if kept.is_empty() {
                let (head, _) = token::truncate(&record, budget);
                if !head.is_empty() {
                    kept.push(head);
                }
            }
            break;
        }
        used += cost;
        kept.push(record);
    }
    (kept.join("\n"), truncated)
}
