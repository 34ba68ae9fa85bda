//! The textual interaction DSL between the LLM and the graph.
//!
//! An agent step looks like:
//!
//! ```text
//! Reasoning 2: The question is asking the published date of a paper.
//! Interaction 2: NodeFeature[3101448248, year]
//! ```
//!
//! Calls are `Name[args]`, several per step separated by commas. `Finish`
//! and `RetrieveNode` take their bracket contents verbatim (commas and even
//! stray `]` allowed inside); the two-argument functions split on the first
//! comma. Parsing is total: any input yields a value or a structured error,
//! never a panic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FeatureValue, NodeId};

/// One parsed call to a graph function, or `Finish`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InteractionCall {
    RetrieveNode { query: String },
    NodeFeature { id: NodeId, feature: String },
    NeighborCheck { id: NodeId, edge_type: String },
    NodeDegree { id: NodeId, edge_type: String },
    Finish { answer: String },
}

impl InteractionCall {
    pub fn is_finish(&self) -> bool {
        matches!(self, InteractionCall::Finish { .. })
    }
}

/// A full LLM step: its reasoning text plus every call, in textual order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStep {
    pub reasoning: String,
    pub calls: Vec<InteractionCall>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("no recognizable interaction call")]
    NoCall,
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unbalanced brackets near `{0}`")]
    UnbalancedBrackets(String),
    #[error("empty argument in `{0}`")]
    EmptyArgument(String),
    #[error("invalid node id `{0}` in call arguments")]
    InvalidNodeId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {kind}")]
pub struct ParseError {
    pub step: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    RetrieveNode,
    NodeFeature,
    NeighborCheck,
    NodeDegree,
    Finish,
}

impl Func {
    fn canonical(self) -> &'static str {
        match self {
            Func::RetrieveNode => "RetrieveNode",
            Func::NodeFeature => "NodeFeature",
            Func::NeighborCheck => "NeighborCheck",
            Func::NodeDegree => "NodeDegree",
            Func::Finish => "Finish",
        }
    }

    /// Case-insensitive lookup; `NeighbourCheck` is an accepted spelling.
    fn lookup(name: &str) -> Option<Func> {
        match name.to_ascii_lowercase().as_str() {
            "retrievenode" => Some(Func::RetrieveNode),
            "nodefeature" => Some(Func::NodeFeature),
            "neighborcheck" | "neighbourcheck" => Some(Func::NeighborCheck),
            "nodedegree" => Some(Func::NodeDegree),
            "finish" => Some(Func::Finish),
            _ => None,
        }
    }

    /// Bracket contents taken verbatim rather than split on a comma.
    fn verbatim(self) -> bool {
        matches!(self, Func::RetrieveNode | Func::Finish)
    }
}

/// Extract the reasoning line(s) and every function call from one LLM step.
///
/// `step` is the 1-based step index, used only in error reports.
pub fn parse_step(text: &str, step: usize) -> Result<ParsedStep, ParseError> {
    let err = |kind| ParseError { step, kind };

    let mut calls = Vec::new();
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut pos = 0;
    while let Some((start, func, open)) = next_call_site(text, pos) {
        let (call, end) = parse_args(text, func, open).map_err(&err)?;
        spans.push((start, end));
        pos = end;
        let finish = call.is_finish();
        calls.push(call);
        if finish {
            // Finish terminates the episode; anything after it is ignored
            break;
        }
    }

    if let Some(name) = unknown_function(text, &spans, calls.is_empty()) {
        return Err(err(ParseErrorKind::UnknownFunction(name)));
    }
    if calls.is_empty() {
        return Err(err(ParseErrorKind::NoCall));
    }

    let reasoning = extract_reasoning(text, spans[0].0);
    Ok(ParsedStep { reasoning, calls })
}

/// Canonical text of one call: `Name[arg]` or `Name[arg1, arg2]`.
pub fn render_call(call: &InteractionCall) -> String {
    match call {
        InteractionCall::RetrieveNode { query } => format!("RetrieveNode[{query}]"),
        InteractionCall::NodeFeature { id, feature } => format!("NodeFeature[{id}, {feature}]"),
        InteractionCall::NeighborCheck { id, edge_type } => {
            format!("NeighborCheck[{id}, {edge_type}]")
        }
        InteractionCall::NodeDegree { id, edge_type } => format!("NodeDegree[{id}, {edge_type}]"),
        InteractionCall::Finish { answer } => format!("Finish[{answer}]"),
    }
}

/// Canonical text of a call list, comma separated.
pub fn render_calls(calls: &[InteractionCall]) -> String {
    calls.iter().map(render_call).collect::<Vec<_>>().join(", ")
}

/// The result of executing one call, ready to be phrased as feedback.
#[derive(Debug, Clone, PartialEq)]
pub enum CallOutcome {
    /// Node ids returned by `RetrieveNode`, best first.
    Retrieved(Vec<NodeId>),
    Feature(FeatureValue),
    Neighbors(Vec<NodeId>),
    Degree(usize),
    /// Execution failed; phrased so the LLM can recover.
    Error(String),
}

/// Phrase one step's results as a single `Execution N:` feedback line.
pub fn render_observation(step: usize, results: &[CallOutcome]) -> String {
    let parts: Vec<String> = results.iter().map(render_outcome).collect();
    format!("Execution {step}: {}", parts.join(", "))
}

fn render_outcome(outcome: &CallOutcome) -> String {
    match outcome {
        CallOutcome::Retrieved(ids) => match ids.as_slice() {
            [] => "Error: no node matched the query.".to_string(),
            [one] => format!("The ID of this node is {one}."),
            many => {
                let list: Vec<String> = many.iter().map(NodeId::to_string).collect();
                format!("The IDs of these nodes are {}.", list.join(", "))
            }
        },
        CallOutcome::Feature(value) => value.display(),
        CallOutcome::Neighbors(ids) => {
            let quoted: Vec<String> = ids.iter().map(|n| format!("'{n}'")).collect();
            format!("[{}]", quoted.join(", "))
        }
        CallOutcome::Degree(d) => d.to_string(),
        CallOutcome::Error(message) => format!("Error: {message}"),
    }
}

// --- scanning helpers ---

/// Try to read a known function name at byte offset `at`; returns the
/// function and the offset of its `[` when the name is followed by one.
fn known_name_at(text: &str, at: usize) -> Option<(Func, usize)> {
    let bytes = text.as_bytes();
    if at > 0 && (bytes[at - 1].is_ascii_alphanumeric() || bytes[at - 1] == b'_') {
        return None; // not a word boundary
    }
    let mut end = at;
    while end < bytes.len() && bytes[end].is_ascii_alphabetic() {
        end += 1;
    }
    if end == at {
        return None;
    }
    let func = Func::lookup(&text[at..end])?;
    let mut cursor = end;
    while cursor < bytes.len() && (bytes[cursor] == b' ' || bytes[cursor] == b'\t') {
        cursor += 1;
    }
    if cursor < bytes.len() && bytes[cursor] == b'[' {
        Some((func, cursor))
    } else {
        None
    }
}

/// Next call site (name start, function, `[` offset) at or after `from`.
fn next_call_site(text: &str, from: usize) -> Option<(usize, Func, usize)> {
    for (at, byte) in text.as_bytes().iter().enumerate().skip(from) {
        if !byte.is_ascii_alphabetic() {
            continue;
        }
        if let Some((func, open)) = known_name_at(text, at) {
            return Some((at, func, open));
        }
    }
    None
}

/// Offset of the `,` starting the earliest `, KnownName[` separator in
/// `text`, if any.
fn separator_boundary(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    for (at, &byte) in bytes.iter().enumerate() {
        if byte != b',' {
            continue;
        }
        let mut cursor = at + 1;
        while cursor < bytes.len() && (bytes[cursor] == b' ' || bytes[cursor] == b'\t') {
            cursor += 1;
        }
        if cursor < bytes.len() && known_name_at(text, cursor).is_some() {
            return Some(at);
        }
    }
    None
}

fn snippet(text: &str) -> String {
    const LIMIT: usize = 60;
    let trimmed = text.trim();
    if trimmed.len() <= LIMIT {
        trimmed.to_string()
    } else {
        let mut end = LIMIT;
        while !trimmed.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}...", &trimmed[..end])
    }
}

/// Parse the bracketed arguments opening at `open`; returns the call and the
/// offset just past the closing bracket.
fn parse_args(
    text: &str,
    func: Func,
    open: usize,
) -> Result<(InteractionCall, usize), ParseErrorKind> {
    let rest = &text[open + 1..];
    let eol = rest.find('\n').unwrap_or(rest.len());

    if func.verbatim() {
        // contents run to the last `]` before end-of-line or the next
        // `, KnownName[` boundary, so queries may contain brackets
        let limit = separator_boundary(rest).map_or(eol, |b| b.min(eol));
        let close = rest[..limit]
            .rfind(']')
            .ok_or_else(|| ParseErrorKind::UnbalancedBrackets(snippet(&rest[..limit])))?;
        let arg = rest[..close].trim();
        if arg.is_empty() {
            return Err(ParseErrorKind::EmptyArgument(format!(
                "{}[{}]",
                func.canonical(),
                &rest[..close]
            )));
        }
        let call = match func {
            Func::RetrieveNode => InteractionCall::RetrieveNode {
                query: arg.to_string(),
            },
            Func::Finish => InteractionCall::Finish {
                answer: arg.to_string(),
            },
            _ => unreachable!(),
        };
        return Ok((call, open + 1 + close + 1));
    }

    // two-argument form: contents to the first `]`, split on the first comma
    let close = rest[..eol]
        .find(']')
        .ok_or_else(|| ParseErrorKind::UnbalancedBrackets(snippet(&rest[..eol])))?;
    let raw = &rest[..close];
    let comma = raw
        .find(',')
        .ok_or_else(|| ParseErrorKind::EmptyArgument(snippet(raw)))?;
    let first = raw[..comma].trim();
    let second = raw[comma + 1..].trim();
    if first.is_empty() || second.is_empty() {
        return Err(ParseErrorKind::EmptyArgument(snippet(raw)));
    }
    let id = NodeId::new(first).map_err(|_| ParseErrorKind::InvalidNodeId(first.to_string()))?;
    let call = match func {
        Func::NodeFeature => InteractionCall::NodeFeature {
            id,
            feature: second.to_string(),
        },
        Func::NeighborCheck => InteractionCall::NeighborCheck {
            id,
            edge_type: second.to_string(),
        },
        Func::NodeDegree => InteractionCall::NodeDegree {
            id,
            edge_type: second.to_string(),
        },
        _ => unreachable!(),
    };
    Ok((call, open + 1 + close + 1))
}

/// Look for `identifier[` occurrences outside every parsed call span.
/// With no parsed calls at all, any such occurrence is an unknown function;
/// otherwise only ones sitting on an interaction-labeled line (or starting
/// their line) count, so bracketed prose in the reasoning stays legal.
fn unknown_function(text: &str, spans: &[(usize, usize)], no_calls: bool) -> Option<String> {
    let bytes = text.as_bytes();
    let inside = |at: usize| spans.iter().any(|&(s, e)| at >= s && at < e);
    let mut at = 0;
    while at < bytes.len() {
        if !bytes[at].is_ascii_alphabetic()
            || (at > 0 && (bytes[at - 1].is_ascii_alphanumeric() || bytes[at - 1] == b'_'))
            || inside(at)
        {
            at += 1;
            continue;
        }
        let mut end = at;
        while end < bytes.len() && bytes[end].is_ascii_alphabetic() {
            end += 1;
        }
        let name = &text[at..end];
        let mut cursor = end;
        while cursor < bytes.len() && (bytes[cursor] == b' ' || bytes[cursor] == b'\t') {
            cursor += 1;
        }
        let called = cursor < bytes.len() && bytes[cursor] == b'[';
        if called && Func::lookup(name).is_none() {
            let line_start = text[..at].rfind('\n').map_or(0, |i| i + 1);
            let prefix = text[line_start..at].trim_start();
            let labeled = is_interaction_label(prefix) || prefix.is_empty();
            if no_calls || labeled {
                return Some(name.to_string());
            }
        }
        at = end.max(at + 1);
    }
    None
}

/// Does `prefix` look like `Interaction 3:` / `Action:` up to the call?
fn is_interaction_label(prefix: &str) -> bool {
    let lower = prefix.to_ascii_lowercase();
    for label in ["interaction", "action"] {
        if let Some(rest) = lower.strip_prefix(label) {
            let rest = rest.trim_start();
            let rest = rest.trim_start_matches(|c: char| c.is_ascii_digit());
            if rest.trim_start().starts_with(':') {
                return true;
            }
        }
    }
    false
}

/// Reasoning lines carry a `Reasoning N:` or `Thought N:` prefix; when no
/// line does, everything before the first call (minus a trailing
/// `Interaction N:` label) is the reasoning.
fn extract_reasoning(text: &str, first_call: usize) -> String {
    let mut lines = Vec::new();
    for line in text.lines() {
        if let Some(rest) = strip_reasoning_label(line) {
            lines.push(rest.trim().to_string());
        }
    }
    if !lines.is_empty() {
        return lines.join("\n");
    }
    let head = &text[..first_call];
    let last_line_start = head.rfind('\n').map_or(0, |i| i + 1);
    let head = if is_interaction_label(head[last_line_start..].trim_start()) {
        &head[..last_line_start]
    } else {
        head
    };
    head.trim().to_string()
}

fn strip_reasoning_label(line: &str) -> Option<&str> {
    let trimmed = line.trim_start();
    let lower = trimmed.to_ascii_lowercase();
    for label in ["reasoning", "thought"] {
        if let Some(rest) = lower.strip_prefix(label) {
            let rest = rest.trim_start();
            let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
            let rest = &rest[digits..];
            if let Some(after) = rest.trim_start().strip_prefix(':') {
                let consumed = trimmed.len() - after.len();
                return Some(&trimmed[consumed..]);
            }
        }
    }
    None
}

impl fmt::Display for InteractionCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_call(self))
    }
}

impl Serialize for InteractionCall {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&render_call(self))
    }
}

impl<'de> Deserialize<'de> for InteractionCall {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        let (start, func, open) =
            next_call_site(&raw, 0).ok_or_else(|| serde::de::Error::custom("not a call"))?;
        if start != 0 {
            return Err(serde::de::Error::custom("not a bare call"));
        }
        let (call, _) = parse_args(&raw, func, open).map_err(serde::de::Error::custom)?;
        Ok(call)
    }
}
