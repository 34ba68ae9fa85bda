//! Scoring and aggregation: Rouge-L, an LLM judge, and per-method /
//! per-graph / per-difficulty report tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::llm::{ChatBackend, ChatMessage, GenerationConfig, LlmError};
use crate::retrieval::tokenize;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no results to aggregate")]
    Empty,
    #[error("results span multiple graphs but some carry no graph_id")]
    MissingGraphId,
}

/// Rouge-L F1 between two texts: LCS over lowercase alphanumeric tokens,
/// precision = LCS/|prediction|, recall = LCS/|reference|.
pub fn rouge_l(prediction: &str, reference: &str) -> f64 {
    rouge_l_beta(prediction, reference, 1.0)
}

/// Rouge-L with an explicit F-measure beta (beta > 1 weighs recall higher;
/// classic recall-weighted setups use a large beta). Returns 0 when either
/// side has no tokens.
pub fn rouge_l_beta(prediction: &str, reference: &str, beta: f64) -> f64 {
    let pred = tokenize(prediction);
    let refr = tokenize(reference);
    if pred.is_empty() || refr.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(&pred, &refr) as f64;
    if lcs == 0.0 {
        return 0.0;
    }
    let precision = lcs / pred.len() as f64;
    let recall = lcs / refr.len() as f64;
    let b2 = beta * beta;
    (1.0 + b2) * precision * recall / (recall + b2 * precision)
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diagonal = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y {
                diagonal + 1
            } else {
                up.max(row[j])
            };
            diagonal = up;
        }
    }
    row[b.len()]
}

/// The frozen judge prompt.
pub fn judge_prompt(question: &str, reference: &str, prediction: &str) -> Vec<ChatMessage> {
    vec![ChatMessage::user(format!(
        "Question: {question}\nGround truth: {reference}\nModel answer: {prediction}\n\
         Is the model answer correct? Answer exactly 'correct' or 'incorrect'."
    ))]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JudgeOutcome {
    pub correct: bool,
    /// False when the judge never produced a usable verdict; such results
    /// count as incorrect but stay flagged.
    pub conforming: bool,
}

/// Ask the judge whether prediction and ground truth agree. A completion
/// without a clear verdict triggers exactly one re-ask, after which the
/// result counts as incorrect with the non-conforming flag set.
pub fn judge_score(
    prediction: &str,
    reference: &str,
    question: &str,
    backend: &dyn ChatBackend,
    generation: &GenerationConfig,
) -> Result<JudgeOutcome, LlmError> {
    let messages = judge_prompt(question, reference, prediction);
    for _ in 0..2 {
        let completion = backend.complete(&messages, generation)?;
        if let Some(correct) = parse_verdict(&completion.text) {
            return Ok(JudgeOutcome { correct, conforming: true });
        }
    }
    Ok(JudgeOutcome { correct: false, conforming: false })
}

/// The verdict is the first word of the completion; `correct` must not be
/// matched inside `incorrect`.
fn parse_verdict(text: &str) -> Option<bool> {
    let first: String = text
        .trim_start()
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect::<String>()
        .to_ascii_lowercase();
    match first.as_str() {
        "correct" => Some(true),
        "incorrect" => Some(false),
        _ => None,
    }
}

/// One scored prediction, ready for aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredResult {
    pub qid: String,
    pub method: String,
    pub prediction: String,
    pub reference: String,
    pub rouge_l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub judge_correct: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub judge_nonconforming: bool,
    pub difficulty: String,
    pub graph_id: String,
}

/// Mean scores for one table cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub count: usize,
    /// Mean Rouge-L scaled to 0..100.
    pub rouge_l: f64,
    pub judged: usize,
    /// Percentage of judged results labeled correct, when any were judged.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gpt4score: Option<f64>,
}

impl Cell {
    fn add(&mut self, result: &ScoredResult) {
        self.count += 1;
        self.rouge_l += result.rouge_l;
        if result.judge_correct.is_some() {
            self.judged += 1;
        }
        if result.judge_correct == Some(true) {
            self.gpt4score = Some(self.gpt4score.unwrap_or(0.0) + 1.0);
        }
    }

    fn finalize(&mut self) {
        if self.count > 0 {
            self.rouge_l = 100.0 * self.rouge_l / self.count as f64;
        }
        self.gpt4score = if self.judged > 0 {
            Some(100.0 * self.gpt4score.unwrap_or(0.0) / self.judged as f64)
        } else {
            None
        };
    }
}

/// Aggregated report over a result set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub per_method: BTreeMap<String, Cell>,
    pub per_graph: BTreeMap<String, BTreeMap<String, Cell>>,
    pub per_difficulty: BTreeMap<String, BTreeMap<String, Cell>>,
}

/// Mean Rouge-L (x100) and GPT4score per method, per graph, per difficulty.
pub fn aggregate(results: &[ScoredResult]) -> Result<Report, EvalError> {
    if results.is_empty() {
        return Err(EvalError::Empty);
    }
    let graphs: BTreeSet<&str> = results.iter().map(|r| r.graph_id.as_str()).collect();
    if graphs.len() > 1 && graphs.contains("") {
        return Err(EvalError::MissingGraphId);
    }

    let mut per_method: BTreeMap<String, Cell> = BTreeMap::new();
    let mut per_graph: BTreeMap<String, BTreeMap<String, Cell>> = BTreeMap::new();
    let mut per_difficulty: BTreeMap<String, BTreeMap<String, Cell>> = BTreeMap::new();
    for result in results {
        per_method.entry(result.method.clone()).or_default().add(result);
        per_graph
            .entry(result.method.clone())
            .or_default()
            .entry(result.graph_id.clone())
            .or_default()
            .add(result);
        per_difficulty
            .entry(result.method.clone())
            .or_default()
            .entry(result.difficulty.clone())
            .or_default()
            .add(result);
    }
    for cell in per_method.values_mut() {
        cell.finalize();
    }
    for table in [&mut per_graph, &mut per_difficulty] {
        for cells in table.values_mut() {
            for cell in cells.values_mut() {
                cell.finalize();
            }
        }
    }
    Ok(Report { per_method, per_graph, per_difficulty })
}

const DIFFICULTY_ORDER: &[&str] = &["easy", "medium", "hard"];

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Aligned plain-text table, one row per (method, slice).
    pub fn to_text_table(&self) -> String {
        let mut rows: Vec<[String; 5]> = vec![[
            "method".into(),
            "slice".into(),
            "n".into(),
            "rouge-l".into(),
            "gpt4score".into(),
        ]];
        let fmt_cell = |label: &str, slice: &str, cell: &Cell| {
            [
                label.to_string(),
                slice.to_string(),
                cell.count.to_string(),
                format!("{:.2}", cell.rouge_l),
                cell.gpt4score.map_or("-".to_string(), |s| format!("{s:.2}")),
            ]
        };
        for (method, cell) in &self.per_method {
            rows.push(fmt_cell(method, "overall", cell));
            if let Some(graphs) = self.per_graph.get(method) {
                if graphs.len() > 1 {
                    for (graph, cell) in graphs {
                        rows.push(fmt_cell(method, graph, cell));
                    }
                }
            }
            if let Some(difficulties) = self.per_difficulty.get(method) {
                let mut keys: Vec<&String> = difficulties.keys().collect();
                keys.sort_by_key(|k| {
                    DIFFICULTY_ORDER
                        .iter()
                        .position(|d| d == &k.as_str())
                        .unwrap_or(DIFFICULTY_ORDER.len())
                });
                for key in keys {
                    rows.push(fmt_cell(method, key, &difficulties[key]));
                }
            }
        }
        let widths: Vec<usize> = (0..5)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        rows.iter()
            .map(|row| {
                row.iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            })
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}
