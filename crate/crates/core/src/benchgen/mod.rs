//! Benchmark construction at desk scale: synthetic schema-conformant
//! graphs, question templates for five domains, function-chain ground
//! truth, LLM paraphrasing, and dataset export.

pub mod chain;
pub mod dataset;
pub mod instantiate;
pub mod paraphrase;
pub mod schema;
pub mod synth;
pub mod template;

pub use chain::{ChainFailure, ChainStep, Value};
pub use dataset::{
    export_dataset, load_dataset, load_dataset_file, write_dataset, DatasetManifest, QASample,
};
pub use instantiate::{instantiate, InstantiateOutcome};
pub use paraphrase::paraphrase_template;
pub use schema::{domain_schema, Domain};
pub use synth::{generate_synthetic_graph, SynthConfig};
pub use template::{builtin_templates, AnswerSource, Difficulty, QuestionTemplate, TemplateFile};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown domain schema `{0}`")]
    UnknownDomain(String),
    #[error("unknown node type `{node_type}` for domain `{domain}`")]
    UnknownNodeType { domain: String, node_type: String },
    #[error("chain configuration error in template `{template}`: {message}")]
    ChainConfig { template: String, message: String },
    #[error("template `{template}` placeholder `{slot}` is not bound by its chain")]
    UnboundSlot { template: String, slot: String },
    #[error(
        "graph `{graph}` yielded {produced} of {requested} requested samples for \
         template `{template}`"
    )]
    Shortfall {
        template: String,
        graph: String,
        requested: usize,
        produced: usize,
    },
    #[error("paraphrase kept losing placeholders after {attempts} attempts")]
    ParaphraseFailed { attempts: usize },
    #[error(transparent)]
    Llm(#[from] crate::llm::LlmError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error("dataset JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
