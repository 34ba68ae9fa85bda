use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use graphcot::benchgen::Difficulty;
use graphcot::graph::{manifest_path_for, Graph};
use graphcot::retrieval::{Bm25Index, IndexConfig};
use graphcot::runner::{BackendSpec, Method, RunConfig};
use graphcot_cli::commands;
use graphcot_cli::service::{self, EnvState};

#[derive(Parser)]
#[command(name = "graphcot", version, about = "Question answering over text-attributed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and persist a BM25 index over a graph.
    Index {
        #[arg(long)]
        graph: PathBuf,
        /// Manifest sidecar; defaults to <graph>.manifest.json.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// TOML index config; defaults to per-type searchable fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic graph for one of the domain schemas.
    GenGraph {
        /// academic | ecommerce | literature | healthcare | legal
        #[arg(long)]
        schema: String,
        /// Approximate total node count, split by schema weights.
        #[arg(long, default_value_t = 1000)]
        size: usize,
        /// Per-type overrides, node_type=count (repeatable).
        #[arg(long = "set")]
        overrides: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        graph_id: Option<String>,
        /// Directory receiving graph.json and graph.manifest.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Instantiate question templates over a graph into a JSONL dataset.
    GenQuestions {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// builtin:<domain> or a path to a template JSON file.
        #[arg(long)]
        templates: String,
        #[arg(long, default_value_t = 10)]
        per_template: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of easy,medium,hard.
        #[arg(long, default_value = "easy,medium")]
        difficulties: String,
        /// Restrict to specific template ids (repeatable).
        #[arg(long = "template")]
        template_ids: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a method over a dataset, writing one result file per question.
    Run {
        /// base | text-rag | graph-rag | graph-cot
        #[arg(long)]
        method: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        dataset: PathBuf,
        /// scripted:<path> or http:<url>.
        #[arg(long)]
        backend: String,
        #[arg(long, default_value = "gpt-3.5-turbo")]
        model: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 1)]
        hops: usize,
        #[arg(long, default_value_t = 1)]
        k_docs: usize,
        #[arg(long, default_value_t = 10)]
        max_iterations: usize,
        #[arg(long, default_value_t = 1)]
        retrieval_k: usize,
        #[arg(long, default_value_t = 4096)]
        context_budget: usize,
        /// JSON array of demonstration strings for graph-cot.
        #[arg(long)]
        demonstrations: Option<PathBuf>,
        /// Drop dangling edges instead of rejecting the graph.
        #[arg(long)]
        lenient: bool,
    },
    /// Score a run directory with Rouge-L and optionally an LLM judge.
    Eval {
        #[arg(long)]
        run_dir: PathBuf,
        /// Judge backend: scripted:<path> or http:<url>.
        #[arg(long)]
        judge: Option<String>,
        #[arg(long, default_value = "gpt-4")]
        model: String,
        #[arg(long, default_value_t = 1)]
        judge_workers: usize,
    },
    /// Serve the graph environment over HTTP.
    Serve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Persisted index JSON; built from the graph when omitted.
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Index { graph, manifest, config, out } => {
            let count = commands::cmd_index(&graph, manifest.as_deref(), config.as_deref(), &out)?;
            println!("indexed {count} documents");
        }
        Command::GenGraph { schema, size, overrides, seed, graph_id, out } => {
            let (path, nodes) =
                commands::cmd_gen_graph(&schema, size, &overrides, seed, graph_id, &out)?;
            println!("wrote {} ({nodes} nodes)", path.display());
        }
        Command::GenQuestions {
            graph,
            manifest,
            templates,
            per_template,
            seed,
            difficulties,
            template_ids,
            out,
        } => {
            let difficulties = parse_difficulties(&difficulties)?;
            let dataset_manifest = commands::cmd_gen_questions(
                &graph,
                manifest.as_deref(),
                &templates,
                per_template,
                seed,
                &difficulties,
                &template_ids,
                &out,
            )?;
            println!("wrote {} samples to {}", dataset_manifest.total, out.display());
        }
        Command::Run {
            method,
            graph,
            manifest,
            dataset,
            backend,
            model,
            out,
            seed,
            workers,
            hops,
            k_docs,
            max_iterations,
            retrieval_k,
            context_budget,
            demonstrations,
            lenient,
        } => {
            let method = Method::parse(&method)
                .with_context(|| format!("unknown method `{method}`"))?;
            let backend = BackendSpec::parse(&backend, &model)
                .with_context(|| format!("bad backend spec `{backend}`"))?;
            let cfg = RunConfig {
                manifest_path: manifest,
                seed,
                workers,
                hops,
                k_docs,
                max_iterations,
                retrieval_k,
                context_token_budget: context_budget,
                demonstrations_path: demonstrations,
                strict_load: !lenient,
                ..RunConfig::new(method, graph, dataset, backend, out)
            };
            let summary = commands::cmd_run(&cfg)?;
            println!("{}", commands::format_summary(&summary));
            if summary.failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Eval { run_dir, judge, model, judge_workers } => {
            let report = commands::cmd_eval(&run_dir, judge.as_deref(), &model, judge_workers)?;
            print!("{}", report.to_text_table());
        }
        Command::Serve { graph, manifest, index, bind } => {
            let manifest = manifest.unwrap_or_else(|| manifest_path_for(&graph));
            let (graph, _) = Graph::load_files(&graph, &manifest, true)?;
            let index = match index {
                Some(path) => Bm25Index::from_json(&std::fs::read_to_string(&path)?)
                    .with_context(|| format!("parsing index {}", path.display()))?,
                None => Bm25Index::build(&graph, &IndexConfig::default_for(&graph))?,
            };
            let state = Arc::new(EnvState { graph, index });
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(state, &bind))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_difficulties(raw: &str) -> Result<Vec<Difficulty>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match Difficulty::parse(part) {
            Some(difficulty) => out.push(difficulty),
            None => bail!("unknown difficulty `{part}`"),
        }
    }
    if out.is_empty() {
        bail!("no difficulties selected");
    }
    Ok(out)
}
