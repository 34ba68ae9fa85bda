//! Experiment orchestration: run a method over a dataset against a graph,
//! writing one result file per question into a resumable run directory.
//!
//! Result files are deterministic for a fixed config and scripted backend:
//! they carry no wall-clock data (timing goes to the run log), and they are
//! written atomically so interrupted runs resume cleanly.

use std::collections::VecDeque;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{self, AgentConfig, Termination, TokenCounts, TraceStep};
use crate::baselines::{self, RagConfig};
use crate::benchgen::dataset::{load_dataset_file, QASample};
use crate::benchgen::template::AnswerSource;
use crate::benchgen::BenchError;
use crate::eval::{self, Report, ScoredResult};
use crate::graph::{Graph, GraphError};
use crate::llm::{ChatBackend, GenerationConfig, HttpBackend, LlmError, ScriptedBackend};
use crate::retrieval::{Bm25Index, IndexConfig, RetrievalError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("result JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config snapshot: {0}")]
    Toml(String),
    #[error("run directory `{0}` has no results")]
    EmptyRun(PathBuf),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
}

/// The four methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Base,
    TextRag,
    GraphRag,
    GraphCot,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Base => "base",
            Method::TextRag => "text-rag",
            Method::GraphRag => "graph-rag",
            Method::GraphCot => "graph-cot",
        }
    }

    pub fn parse(value: &str) -> Option<Method> {
        match value {
            "base" => Some(Method::Base),
            "text-rag" => Some(Method::TextRag),
            "graph-rag" => Some(Method::GraphRag),
            "graph-cot" => Some(Method::GraphCot),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which LLM to talk to. API keys come from the environment, never from
/// the config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendSpec {
    /// Replay transcripts: a single file shared by every episode, or a
    /// directory holding one `<qid>.json` transcript per question.
    Scripted { path: PathBuf },
    /// OpenAI-compatible chat-completions endpoint.
    Http { url: String, model: String },
}

impl BackendSpec {
    /// `scripted:<path>` or `http:<url>` (model set separately).
    pub fn parse(spec: &str, model: &str) -> Option<BackendSpec> {
        if let Some(path) = spec.strip_prefix("scripted:") {
            return Some(BackendSpec::Scripted { path: PathBuf::from(path) });
        }
        if let Some(url) = spec.strip_prefix("http:") {
            // spec strings look like http:https://host/v1/chat/completions
            return Some(BackendSpec::Http { url: url.to_string(), model: model.to_string() });
        }
        None
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub graph_path: PathBuf,
    /// Manifest sidecar; derived from `graph_path` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest_path: Option<PathBuf>,
    pub dataset_path: PathBuf,
    pub backend: BackendSpec,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
    /// Ego-graph radius for graph-rag.
    pub hops: usize,
    /// Retrieved documents for the RAG baselines.
    pub k_docs: usize,
    /// Iteration cap for graph-cot.
    pub max_iterations: usize,
    /// Hits surfaced per RetrieveNode call.
    pub retrieval_k: usize,
    pub context_token_budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demonstrations_path: Option<PathBuf>,
    pub strict_load: bool,
}

impl RunConfig {
    pub fn new(
        method: Method,
        graph_path: impl Into<PathBuf>,
        dataset_path: impl Into<PathBuf>,
        backend: BackendSpec,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        RunConfig {
            method,
            graph_path: graph_path.into(),
            manifest_path: None,
            dataset_path: dataset_path.into(),
            backend,
            output_dir: output_dir.into(),
            seed: 0,
            workers: 1,
            hops: 1,
            k_docs: 1,
            max_iterations: 10,
            retrieval_k: 1,
            context_token_budget: 4096,
            demonstrations_path: None,
            strict_load: true,
        }
    }
}

/// One per-question result file; the same shape for every method so the
/// evaluator stays method-agnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub qid: String,
    pub method: String,
    pub question: String,
    pub reference: String,
    pub difficulty: String,
    pub graph_id: String,
    pub template_id: String,
    pub prediction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<Termination>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_counts: Option<TokenCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_tokens: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_truncated: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub total: usize,
    pub completed: usize,
    pub skipped: usize,
    pub failed: usize,
}

impl RunSummary {
    pub fn remaining(&self) -> usize {
        self.total - self.completed - self.skipped - self.failed
    }
}

/// Results live under `<run dir>/results/`, one JSON file per question.
pub fn results_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("results")
}

fn sanitize_qid(qid: &str) -> String {
    qid.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect()
}

pub fn result_path(output_dir: &Path, qid: &str) -> PathBuf {
    results_dir(output_dir).join(format!("{}.json", sanitize_qid(qid)))
}

/// Write-then-rename so readers never observe partial files.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

struct RunLog {
    file: Mutex<std::fs::File>,
}

impl RunLog {
    fn open(output_dir: &Path) -> std::io::Result<Self> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(output_dir.join("run.log"))?;
        Ok(RunLog { file: Mutex::new(file) })
    }

    fn line(&self, message: &str) {
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        let mut file = self.file.lock().expect("log lock");
        let _ = writeln!(file, "[{stamp}] {message}");
    }
}

enum Backend {
    SharedScripted(ScriptedBackend),
    PerQuestion(PathBuf),
    Http(HttpBackend, String),
}

impl Backend {
    fn open(spec: &BackendSpec) -> Result<Backend, RunError> {
        match spec {
            BackendSpec::Scripted { path } => {
                if path.is_dir() {
                    Ok(Backend::PerQuestion(path.clone()))
                } else {
                    Ok(Backend::SharedScripted(ScriptedBackend::load(path)?))
                }
            }
            BackendSpec::Http { url, model } => {
                let backend = HttpBackend::new(url.clone(), HttpBackend::api_key_from_env());
                Ok(Backend::Http(backend, model.clone()))
            }
        }
    }

    fn generation(&self) -> GenerationConfig {
        match self {
            Backend::Http(_, model) => GenerationConfig::for_model(model.clone()),
            _ => GenerationConfig::default(),
        }
    }

    /// Run `job` with a backend handle scoped to one question.
    fn with_question<T>(
        &self,
        qid: &str,
        job: impl FnOnce(&dyn ChatBackend) -> T,
    ) -> Result<T, RunError> {
        match self {
            Backend::SharedScripted(backend) => {
                let session = backend.session();
                Ok(job(&session))
            }
            Backend::PerQuestion(dir) => {
                let backend = ScriptedBackend::load(&dir.join(format!("{}.json", sanitize_qid(qid))))?;
                let session = backend.session();
                Ok(job(&session))
            }
            Backend::Http(backend, _) => Ok(job(backend)),
        }
    }
}

/// Load a JSON array of demonstration strings.
pub fn load_demonstrations(path: &Path) -> Result<Vec<String>, RunError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Execute every question in the dataset that has no result file yet.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, RunError> {
    std::fs::create_dir_all(results_dir(&cfg.output_dir))?;
    let snapshot = toml::to_string_pretty(cfg).map_err(|e| RunError::Toml(e.to_string()))?;
    std::fs::write(cfg.output_dir.join("config.toml"), snapshot)?;
    let log = RunLog::open(&cfg.output_dir)?;

    let manifest_path = cfg
        .manifest_path
        .clone()
        .unwrap_or_else(|| crate::graph::manifest_path_for(&cfg.graph_path));
    let (graph, load_report) = Graph::load_files(&cfg.graph_path, &manifest_path, cfg.strict_load)?;
    if load_report.dangling_dropped > 0 {
        log.line(&format!("lenient load dropped {} dangling edges", load_report.dangling_dropped));
    }
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph))?;
    let samples = load_dataset_file(&cfg.dataset_path)?;
    let backend = Backend::open(&cfg.backend)?;
    let demonstrations = match &cfg.demonstrations_path {
        Some(path) => load_demonstrations(path)?,
        None => Vec::new(),
    };

    let queue: Mutex<VecDeque<&QASample>> = Mutex::new(samples.iter().collect());
    let summary = Mutex::new(RunSummary { total: samples.len(), ..RunSummary::default() });

    let workers = cfg.workers.max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let sample = {
                    let mut queue = queue.lock().expect("queue lock");
                    match queue.pop_front() {
                        Some(sample) => sample,
                        None => break,
                    }
                };
                let path = result_path(&cfg.output_dir, &sample.qid);
                if path.exists() {
                    summary.lock().expect("summary").skipped += 1;
                    continue;
                }
                let started = std::time::Instant::now();
                match run_question(cfg, &graph, &index, &backend, &demonstrations, sample) {
                    Ok(result) => {
                        let failed = result.error.is_some();
                        let mut json =
                            serde_json::to_string_pretty(&result).expect("result serializes");
                        json.push('\n');
                        match write_atomic(&path, &json) {
                            Ok(()) => {
                                log.line(&format!(
                                    "{} {} in {:?}{}",
                                    sample.qid,
                                    if failed { "failed" } else { "done" },
                                    started.elapsed(),
                                    result
                                        .error
                                        .as_deref()
                                        .map(|e| format!(": {e}"))
                                        .unwrap_or_default()
                                ));
                                let mut s = summary.lock().expect("summary");
                                if failed {
                                    s.failed += 1;
                                } else {
                                    s.completed += 1;
                                }
                            }
                            Err(e) => {
                                log.line(&format!("{} write error: {e}", sample.qid));
                                summary.lock().expect("summary").failed += 1;
                            }
                        }
                    }
                    Err(e) => {
                        log.line(&format!("{} error: {e}", sample.qid));
                        summary.lock().expect("summary").failed += 1;
                    }
                }
            });
        }
    });

    Ok(summary.into_inner().expect("summary"))
}

fn run_question(
    cfg: &RunConfig,
    graph: &Graph,
    index: &Bm25Index,
    backend: &Backend,
    demonstrations: &[String],
    sample: &QASample,
) -> Result<QuestionResult, RunError> {
    let generation = backend.generation();
    let mut result = QuestionResult {
        qid: sample.qid.clone(),
        method: cfg.method.to_string(),
        question: sample.question.clone(),
        reference: sample.answer.clone(),
        difficulty: sample.difficulty.to_string(),
        graph_id: sample.graph_id.clone(),
        template_id: sample.template_id.clone(),
        prediction: String::new(),
        termination: None,
        steps: Vec::new(),
        token_counts: None,
        context_tokens: None,
        context_truncated: None,
        error: None,
    };

    match cfg.method {
        Method::Base => {
            let outcome = backend.with_question(&sample.qid, |b| {
                baselines::base_llm_answer(&sample.question, b, &generation)
            })?;
            match outcome {
                Ok(prediction) => result.prediction = prediction,
                Err(e) => result.error = Some(e.to_string()),
            }
        }
        Method::TextRag | Method::GraphRag => {
            let rag = RagConfig {
                k_docs: cfg.k_docs,
                hops: cfg.hops,
                context_token_budget: cfg.context_token_budget,
                ..RagConfig::default()
            };
            let outcome = backend.with_question(&sample.qid, |b| {
                if cfg.method == Method::TextRag {
                    baselines::text_rag_answer(&sample.question, graph, index, b, &rag, &generation)
                } else {
                    baselines::graph_rag_answer(&sample.question, graph, index, b, &rag, &generation)
                }
            })?;
            match outcome {
                Ok(output) => {
                    result.prediction = output.prediction;
                    result.context_tokens = Some(output.context_tokens);
                    result.context_truncated = Some(output.context_truncated);
                }
                Err(e) => result.error = Some(e.to_string()),
            }
        }
        Method::GraphCot => {
            let agent_cfg = AgentConfig {
                max_iterations: cfg.max_iterations,
                demonstrations: demonstrations.to_vec(),
                graph_description: graph.description().to_string(),
                retrieval_k: cfg.retrieval_k,
                generation,
                ..AgentConfig::default()
            };
            let trace = backend.with_question(&sample.qid, |b| {
                agent::run_episode(&sample.question, graph, index, b, &agent_cfg)
            })?;
            result.prediction = trace.prediction().to_string();
            result.termination = Some(trace.termination);
            result.steps = trace.steps;
            result.token_counts = Some(trace.token_counts);
            result.error = trace.error;
        }
    }
    Ok(result)
}

/// Read back every result file in a run directory, sorted by file name.
pub fn load_results(output_dir: &Path) -> Result<Vec<QuestionResult>, RunError> {
    let dir = results_dir(output_dir);
    if !dir.is_dir() {
        return Err(RunError::EmptyRun(output_dir.to_path_buf()));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(RunError::EmptyRun(output_dir.to_path_buf()));
    }
    let mut results = Vec::with_capacity(paths.len());
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        results.push(serde_json::from_str(&text)?);
    }
    Ok(results)
}

/// Score a run directory: Rouge-L always, plus the judge when a backend is
/// given (fanned out over `judge_workers` threads; keep it at 1 for
/// positional scripted judges). Curated questions with empty references are
/// left unscored. Writes `report.json` and `report.txt` into the run
/// directory.
pub fn evaluate_run(
    output_dir: &Path,
    judge: Option<&dyn ChatBackend>,
    generation: &GenerationConfig,
    judge_workers: usize,
) -> Result<(Vec<ScoredResult>, Report), RunError> {
    let results = load_results(output_dir)?;
    let scoreable: Vec<&QuestionResult> = results
        .iter()
        .filter(|r| {
            if r.reference.is_empty() {
                log::info!("skipping {} (no reference answer)", r.qid);
            }
            !r.reference.is_empty()
        })
        .collect();

    let verdicts: Vec<(Option<bool>, bool)> = match judge {
        None => vec![(None, false); scoreable.len()],
        Some(backend) => {
            let slots: Mutex<Vec<(Option<bool>, bool)>> =
                Mutex::new(vec![(None, false); scoreable.len()]);
            let queue: Mutex<VecDeque<usize>> = Mutex::new((0..scoreable.len()).collect());
            std::thread::scope(|scope| {
                for _ in 0..judge_workers.max(1) {
                    scope.spawn(|| loop {
                        let i = match queue.lock().expect("queue").pop_front() {
                            Some(i) => i,
                            None => break,
                        };
                        let result = scoreable[i];
                        let verdict = match eval::judge_score(
                            &result.prediction,
                            &result.reference,
                            &result.question,
                            backend,
                            generation,
                        ) {
                            Ok(outcome) => (Some(outcome.correct), !outcome.conforming),
                            Err(e) => {
                                log::warn!("judge failed on {}: {e}", result.qid);
                                (None, false)
                            }
                        };
                        slots.lock().expect("slots")[i] = verdict;
                    });
                }
            });
            slots.into_inner().expect("slots")
        }
    };

    let scored: Vec<ScoredResult> = scoreable
        .iter()
        .zip(verdicts)
        .map(|(result, (judge_correct, judge_nonconforming))| ScoredResult {
            qid: result.qid.clone(),
            method: result.method.clone(),
            prediction: result.prediction.clone(),
            reference: result.reference.clone(),
            rouge_l: eval::rouge_l(&result.prediction, &result.reference),
            judge_correct,
            judge_nonconforming,
            difficulty: result.difficulty.clone(),
            graph_id: result.graph_id.clone(),
        })
        .collect();
    let report = eval::aggregate(&scored)?;
    std::fs::write(output_dir.join("report.json"), report.to_json())?;
    std::fs::write(output_dir.join("report.txt"), report.to_text_table())?;
    Ok((scored, report))
}

/// `answer_source` is carried on samples, not results; re-expose it for
/// callers filtering datasets before a run.
pub fn is_scoreable(sample: &QASample) -> bool {
    sample.answer_source == AnswerSource::Chain && !sample.answer.is_empty()
}
