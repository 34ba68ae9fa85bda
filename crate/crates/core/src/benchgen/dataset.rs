//! Question-answer samples and the JSONL dataset format.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::template::{AnswerSource, Difficulty};
use super::BenchError;

/// One benchmark sample. Re-executing the template's chain with the stored
/// bindings reproduces `answer` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QASample {
    pub qid: String,
    pub question: String,
    pub answer: String,
    pub difficulty: Difficulty,
    pub template_id: String,
    pub graph_id: String,
    #[serde(default)]
    pub answer_source: AnswerSource,
    pub bindings: BTreeMap<String, String>,
}

/// Per-difficulty / per-graph / per-template accounting for a dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub total: usize,
    /// graph id -> difficulty -> count
    pub per_graph: BTreeMap<String, BTreeMap<String, usize>>,
    /// template id -> count
    pub per_template: BTreeMap<String, usize>,
}

impl DatasetManifest {
    pub fn for_samples(samples: &[QASample]) -> Self {
        let mut manifest = DatasetManifest { total: samples.len(), ..Default::default() };
        for sample in samples {
            *manifest
                .per_graph
                .entry(sample.graph_id.clone())
                .or_default()
                .entry(sample.difficulty.to_string())
                .or_default() += 1;
            *manifest.per_template.entry(sample.template_id.clone()).or_default() += 1;
        }
        manifest
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest serializes");
        out.push('\n');
        out
    }
}

/// Write samples as JSONL, one object per line, returning the manifest.
pub fn write_dataset(
    samples: &[QASample],
    sink: &mut dyn Write,
) -> Result<DatasetManifest, BenchError> {
    for sample in samples {
        serde_json::to_writer(&mut *sink, sample)?;
        sink.write_all(b"\n")?;
    }
    Ok(DatasetManifest::for_samples(samples))
}

/// Write `<path>` as JSONL plus a `<path>.manifest.json` sidecar.
pub fn export_dataset(samples: &[QASample], path: &Path) -> Result<DatasetManifest, BenchError> {
    let mut file = std::fs::File::create(path)?;
    let manifest = write_dataset(samples, &mut file)?;
    let manifest_path = path.with_extension("manifest.json");
    std::fs::write(manifest_path, manifest.to_json())?;
    Ok(manifest)
}

pub fn load_dataset(reader: impl BufRead) -> Result<Vec<QASample>, BenchError> {
    let mut samples = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        samples.push(serde_json::from_str(&line)?);
    }
    Ok(samples)
}

pub fn load_dataset_file(path: &Path) -> Result<Vec<QASample>, BenchError> {
    let file = std::fs::File::open(path)?;
    load_dataset(std::io::BufReader::new(file))
}
