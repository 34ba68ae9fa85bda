//! Subcommand implementations.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use graphcot::benchgen::{
    builtin_templates, export_dataset, generate_synthetic_graph, instantiate, DatasetManifest,
    Difficulty, Domain, QASample, SynthConfig, TemplateFile,
};
use graphcot::eval::Report;
use graphcot::graph::{manifest_path_for, Graph};
use graphcot::llm::{ChatBackend, GenerationConfig, HttpBackend, ScriptedBackend};
use graphcot::retrieval::{Bm25Index, IndexConfig};
use graphcot::runner::{self, RunConfig, RunSummary};

fn load_graph(graph: &Path, manifest: Option<&Path>, strict: bool) -> Result<Graph> {
    let manifest = manifest.map(Path::to_path_buf).unwrap_or_else(|| manifest_path_for(graph));
    let (loaded, report) = Graph::load_files(graph, &manifest, strict)
        .with_context(|| format!("loading graph {}", graph.display()))?;
    if report.dangling_dropped > 0 {
        log::warn!("dropped {} dangling edges on load", report.dangling_dropped);
    }
    Ok(loaded)
}

/// Build and persist a BM25 index; returns the indexed document count.
pub fn cmd_index(
    graph: &Path,
    manifest: Option<&Path>,
    config: Option<&Path>,
    out: &Path,
) -> Result<usize> {
    let loaded = load_graph(graph, manifest, true)?;
    let cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading index config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => IndexConfig::default_for(&loaded),
    };
    let index = Bm25Index::build(&loaded, &cfg)?;
    std::fs::write(out, index.to_json())
        .with_context(|| format!("writing index {}", out.display()))?;
    Ok(index.doc_count())
}

/// Generate a synthetic graph and write `<out>/graph.json` plus manifest.
pub fn cmd_gen_graph(
    schema: &str,
    size: usize,
    overrides: &[String],
    seed: u64,
    graph_id: Option<String>,
    out_dir: &Path,
) -> Result<(PathBuf, usize)> {
    let domain = Domain::parse(schema)?;
    let mut cfg = SynthConfig::sized(domain, size, seed);
    if let Some(id) = graph_id {
        cfg = cfg.with_graph_id(id);
    }
    for pair in overrides {
        let (node_type, count) = pair
            .split_once('=')
            .with_context(|| format!("size override `{pair}` is not node_type=count"))?;
        cfg.sizes.insert(node_type.to_string(), count.parse()?);
    }
    let graph = generate_synthetic_graph(&cfg)?;
    std::fs::create_dir_all(out_dir)?;
    let graph_path = out_dir.join("graph.json");
    graph.save_files(&graph_path, &manifest_path_for(&graph_path))?;
    Ok((graph_path, graph.node_count()))
}

/// `builtin:<domain>` or a path to a template JSON file.
pub fn load_templates(spec: &str) -> Result<TemplateFile> {
    if let Some(domain) = spec.strip_prefix("builtin:") {
        return Ok(builtin_templates(Domain::parse(domain)?));
    }
    Ok(TemplateFile::load(Path::new(spec))?)
}

/// Instantiate templates over a graph into a JSONL dataset.
#[allow(clippy::too_many_arguments)]
pub fn cmd_gen_questions(
    graph: &Path,
    manifest: Option<&Path>,
    templates_spec: &str,
    per_template: usize,
    seed: u64,
    difficulties: &[Difficulty],
    template_ids: &[String],
    out: &Path,
) -> Result<DatasetManifest> {
    let loaded = load_graph(graph, manifest, true)?;
    let templates = load_templates(templates_spec)?;
    let mut samples: Vec<QASample> = Vec::new();
    for template in &templates.templates {
        if !difficulties.contains(&template.difficulty) {
            continue;
        }
        if !template_ids.is_empty() && !template_ids.contains(&template.id) {
            continue;
        }
        if template.chain.is_empty() {
            log::warn!("template {} has no chain; skipped", template.id);
            continue;
        }
        let outcome = instantiate(template, &loaded, per_template, seed)?;
        if outcome.shortfall() > 0 {
            log::warn!(
                "template {}: {} of {} samples (graph too small)",
                template.id,
                outcome.samples.len(),
                per_template
            );
        }
        samples.extend(outcome.samples);
    }
    if samples.is_empty() {
        bail!("no samples produced; check difficulties and template ids");
    }
    Ok(export_dataset(&samples, out)?)
}

/// Execute a run; prints nothing (the binary formats the summary).
pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary> {
    Ok(runner::run(cfg)?)
}

pub fn format_summary(summary: &RunSummary) -> String {
    if summary.completed == 0 && summary.failed == 0 && summary.skipped == summary.total {
        return format!("0 remaining ({} already complete)", summary.skipped);
    }
    let mut line = format!("{}/{} finished", summary.completed, summary.total);
    if summary.skipped > 0 {
        line.push_str(&format!(", {} skipped", summary.skipped));
    }
    if summary.failed > 0 {
        line.push_str(&format!(", {} failed", summary.failed));
    }
    line
}

/// Open a judge backend from its spec string. Keys come from the
/// environment.
pub fn open_judge(spec: &str) -> Result<Box<dyn ChatBackend>> {
    if let Some(path) = spec.strip_prefix("scripted:") {
        // one long-lived cursor replaying across all judged questions
        let session = ScriptedBackend::load(Path::new(path))?.session();
        return Ok(Box::new(session));
    }
    if let Some(url) = spec.strip_prefix("http:") {
        return Ok(Box::new(HttpBackend::new(
            url.to_string(),
            HttpBackend::api_key_from_env(),
        )));
    }
    bail!("backend spec must be scripted:<path> or http:<url>, got `{spec}`")
}

/// Score a run directory; returns the report (already written to disk).
pub fn cmd_eval(
    run_dir: &Path,
    judge_spec: Option<&str>,
    model: &str,
    judge_workers: usize,
) -> Result<Report> {
    let judge = judge_spec.map(open_judge).transpose()?;
    let generation = GenerationConfig::for_model(model.to_string());
    let (_, report) =
        runner::evaluate_run(run_dir, judge.as_deref(), &generation, judge_workers)?;
    Ok(report)
}
