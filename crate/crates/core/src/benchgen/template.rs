//! Question templates: text patterns with `{placeholder}` slots plus the
//! function chain that grounds them. The repository ships template files
//! for all five domains; they are embedded here and also usable as plain
//! JSON files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::chain::ChainStep;
use super::schema::Domain;
use super::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }

    pub fn parse(value: &str) -> Option<Difficulty> {
        match value.to_ascii_lowercase().as_str() {
            "easy" => Some(Difficulty::Easy),
            "medium" => Some(Difficulty::Medium),
            "hard" => Some(Difficulty::Hard),
            _ => None,
        }
    }
}

impl std::fmt::Display for Difficulty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a sample's answer comes from: computed by the chain, or curated by
/// hand (hard questions, whose ground truth is not readable from the graph).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerSource {
    #[default]
    Chain,
    Curated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionTemplate {
    pub id: String,
    pub domain: Domain,
    pub difficulty: Difficulty,
    /// Question text with `{placeholder}` slots.
    pub question: String,
    /// Answer pattern, normally just `{answer}`.
    pub answer: String,
    #[serde(default)]
    pub answer_source: AnswerSource,
    /// Alternative question expressions (from paraphrasing), same slots.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paraphrases: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ChainStep>,
}

impl QuestionTemplate {
    /// Canonical expression first, then paraphrases.
    pub fn expressions(&self) -> Vec<&str> {
        let mut all = vec![self.question.as_str()];
        all.extend(self.paraphrases.iter().map(String::as_str));
        all
    }
}

/// `{slot}` names appearing in a pattern, in textual order.
pub fn slots_of(pattern: &str) -> Vec<String> {
    let mut slots = Vec::new();
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open + 1..].find('}') else { break };
        let name = &rest[open + 1..open + 1 + close];
        if !name.is_empty() && !slots.iter().any(|s| s == name) {
            slots.push(name.to_string());
        }
        rest = &rest[open + 1 + close + 1..];
    }
    slots
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateFile {
    pub domain: Domain,
    pub templates: Vec<QuestionTemplate>,
}

impl TemplateFile {
    pub fn from_json(json: &str) -> Result<Self, BenchError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        TemplateFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("templates serialize");
        out.push('\n');
        out
    }

    pub fn get(&self, id: &str) -> Option<&QuestionTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }
}

/// The shipped template set for one domain.
pub fn builtin_templates(domain: Domain) -> TemplateFile {
    let json = match domain {
        Domain::Academic => include_str!("../../data/templates/academic.json"),
        Domain::Ecommerce => include_str!("../../data/templates/ecommerce.json"),
        Domain::Literature => include_str!("../../data/templates/literature.json"),
        Domain::Healthcare => include_str!("../../data/templates/healthcare.json"),
        Domain::Legal => include_str!("../../data/templates/legal.json"),
    };
    TemplateFile::from_json(json).expect("embedded templates are valid")
}
