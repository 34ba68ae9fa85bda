//! Question answering over text-attributed heterogeneous graphs.
//!
//! The crate bundles everything needed to run and evaluate graph-grounded
//! QA methods at desk scale:
//!
//! - [`graph`]: an immutable in-memory graph store with typed nodes, textual
//!   features, per-edge-type adjacency, and BFS ego-graph extraction.
//! - [`retrieval`]: a deterministic BM25 index over node texts, plus an
//!   optional dense index backed by a remote embedding endpoint.
//! - [`protocol`]: the textual interaction DSL an LLM agent uses to call
//!   graph functions (`RetrieveNode`, `NodeFeature`, `NeighborCheck`,
//!   `NodeDegree`, `Finish`).
//! - [`llm`]: a chat-completion abstraction with an OpenAI-compatible HTTP
//!   backend and a deterministic scripted backend for replayed runs.
//! - [`agent`]: the iterative reason / interact / execute loop.
//! - [`baselines`]: base LLM, text RAG, and ego-graph RAG answerers.
//! - [`benchgen`]: synthetic schema-conformant graphs, question templates,
//!   and function-chain ground-truth generation.
//! - [`eval`]: Rouge-L, LLM-judge scoring, and report aggregation.
//! - [`runner`]: experiment orchestration with resumable run directories.

pub mod agent;
pub mod baselines;
pub mod benchgen;
pub mod eval;
pub mod graph;
pub mod llm;
pub mod protocol;
pub mod retrieval;
pub mod runner;
pub mod token;

pub use agent::{AgentConfig, AgentTrace, Termination, TraceStep};
pub use graph::{EgoGraph, FeatureValue, Graph, GraphError, Node, NodeId};
pub use llm::{ChatBackend, ChatMessage, GenerationConfig, LlmError, Role};
pub use protocol::{InteractionCall, ParseError, ParsedStep};
pub use retrieval::{Bm25Index, IndexConfig, RetrievalHit};
