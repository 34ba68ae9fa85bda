//! The iterative graph-reasoning agent.
//!
//! Each episode loops { LLM reasoning -> parse interaction -> execute on
//! graph -> append observation } until the LLM emits `Finish[...]` or a
//! budget runs out. The whole conversation lives in a single prompt that is
//! rebuilt every step with the running Reasoning/Interaction/Execution
//! history appended.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::llm::{ChatBackend, ChatMessage, GenerationConfig};
use crate::protocol::{self, CallOutcome, InteractionCall};
use crate::retrieval::Bm25Index;
use crate::token;

/// Task instruction at the top of every agent prompt.
pub const TASK_INSTRUCTION: &str = "Solve a question answering task with interleaving Thought, \
Interaction with Graph, Feedback from Graph steps.

In Thought step, you can think about what further information is needed, and In Interaction \
step, you can get feedback from graphs with four functions:";

/// Descriptions of the four graph functions, as shown to the LLM.
pub const FUNCTION_DESCRIPTIONS: &str = "(1) RetrieveNode[keyword], which retrieves the related \
node from the graph according to the corresponding query.

(2) NodeFeature[Node, feature], which returns the detailed attribute information of Node \
regarding the given \"feature\" key.

(3) NodeDegree[Node, neighbor type], which calculates the number of \"neighbor type\" neighbors \
of the node Node in the graph.

(4) NeighbourCheck[Node, neighbor type], which lists the \"neighbor type\" neighbours of the \
node Node in the graph and returns them.";

pub const CLOSING_INSTRUCTION: &str =
    "Please answer by providing node main feature (e.g., names) rather than node IDs.";

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("assembled prompt is {tokens} tokens, {overflow} over the {budget}-token budget")]
    PromptOverBudget {
        tokens: usize,
        budget: usize,
        overflow: usize,
    },
}

/// Knobs for one agent run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentConfig {
    /// Hard cap on reasoning iterations (and therefore backend calls).
    pub max_iterations: usize,
    /// In-context demonstrations; empty means zero-shot.
    pub demonstrations: Vec<String>,
    /// Natural-language definition of the graph.
    pub graph_description: String,
    /// How many hits a `RetrieveNode` call surfaces.
    pub retrieval_k: usize,
    /// Consecutive unparseable steps tolerated before giving up.
    pub parse_error_limit: usize,
    /// Client-side cap on prompt size, in approximate tokens.
    pub input_token_budget: usize,
    pub generation: GenerationConfig,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            max_iterations: 10,
            demonstrations: Vec::new(),
            graph_description: String::new(),
            retrieval_k: 1,
            parse_error_limit: 2,
            input_token_budget: 16_000,
            generation: GenerationConfig::default(),
        }
    }
}

/// How an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Finished,
    MaxSteps,
    ParseFailure,
    BackendFailure,
}

/// One executed iteration: what the LLM said, what it called, what came back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub index: usize,
    pub reasoning: String,
    pub calls: Vec<InteractionCall>,
    pub observation: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCounts {
    pub prompt: usize,
    pub completion: usize,
}

/// Full record of one episode; written verbatim into run directories.
/// Wall time is kept out of the serialized form so result files stay
/// byte-identical across reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTrace {
    pub question: String,
    pub steps: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_answer: Option<String>,
    pub termination: Termination,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub token_counts: TokenCounts,
    #[serde(skip, default)]
    pub wall_time: Duration,
}

impl AgentTrace {
    /// The answer used for scoring: unterminated episodes score as empty.
    pub fn prediction(&self) -> &str {
        self.final_answer.as_deref().unwrap_or("")
    }
}

/// Assemble the full prompt: task instruction, function descriptions,
/// demonstrations, graph definition, question, closing instruction, then the
/// running history as Reasoning/Interaction/Execution lines.
pub fn build_prompt(
    question: &str,
    cfg: &AgentConfig,
    history: &[TraceStep],
) -> Result<Vec<ChatMessage>, AgentError> {
    let mut prompt = String::new();
    prompt.push_str(TASK_INSTRUCTION);
    prompt.push_str("\n\n");
    prompt.push_str(FUNCTION_DESCRIPTIONS);
    prompt.push_str("\n\nYou may take as many steps as necessary.\n\n");
    prompt.push_str("Here are some examples:\n\n");
    for demonstration in &cfg.demonstrations {
        prompt.push_str(demonstration.trim_end());
        prompt.push_str("\n\n");
    }
    prompt.push_str("(END OF EXAMPLES)\n\n");
    prompt.push_str(&format!(
        "Definition of the graph: {}\n\nQuestion: {}\n\n{}\n",
        cfg.graph_description, question, CLOSING_INSTRUCTION
    ));
    for step in history {
        prompt.push('\n');
        prompt.push_str(&render_history_step(step));
    }

    let tokens = token::count(&prompt);
    if tokens > cfg.input_token_budget {
        return Err(AgentError::PromptOverBudget {
            tokens,
            budget: cfg.input_token_budget,
            overflow: tokens - cfg.input_token_budget,
        });
    }
    Ok(vec![ChatMessage::user(prompt)])
}

/// One history step as it appears in the prompt. Steps that failed to parse
/// keep their raw completion text so the LLM sees what it wrote.
fn render_history_step(step: &TraceStep) -> String {
    let mut out = String::new();
    if step.calls.is_empty() {
        out.push_str(step.reasoning.trim_end());
    } else {
        out.push_str(&format!(
            "Reasoning {}: {}\nInteraction {}: {}",
            step.index,
            step.reasoning,
            step.index,
            protocol::render_calls(&step.calls)
        ));
    }
    if !step.observation.is_empty() {
        out.push('\n');
        out.push_str(&step.observation);
    }
    out.push('\n');
    out
}

/// Run one question to completion against a graph and its retrieval index.
pub fn run_episode(
    question: &str,
    graph: &Graph,
    index: &Bm25Index,
    backend: &dyn ChatBackend,
    cfg: &AgentConfig,
) -> AgentTrace {
    let started = Instant::now();
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut tokens = TokenCounts::default();
    let mut final_answer = None;
    let mut error = None;
    let mut termination = Termination::MaxSteps;
    let mut consecutive_parse_failures = 0usize;

    for step_index in 1..=cfg.max_iterations {
        let messages = match build_prompt(question, cfg, &steps) {
            Ok(messages) => messages,
            Err(e) => {
                termination = Termination::BackendFailure;
                error = Some(e.to_string());
                break;
            }
        };
        tokens.prompt += messages.iter().map(|m| token::count(&m.content)).sum::<usize>();

        let completion = match backend.complete(&messages, &cfg.generation) {
            Ok(completion) => completion,
            Err(e) => {
                termination = Termination::BackendFailure;
                error = Some(e.to_string());
                break;
            }
        };
        tokens.completion += token::count(&completion.text);

        let parsed = match protocol::parse_step(&completion.text, step_index) {
            Ok(parsed) => {
                consecutive_parse_failures = 0;
                parsed
            }
            Err(parse_error) => {
                consecutive_parse_failures += 1;
                steps.push(TraceStep {
                    index: step_index,
                    reasoning: completion.text.trim().to_string(),
                    calls: Vec::new(),
                    observation: format!(
                        "Execution {step_index}: Error: could not parse interaction."
                    ),
                });
                if consecutive_parse_failures > cfg.parse_error_limit {
                    termination = Termination::ParseFailure;
                    error = Some(parse_error.to_string());
                    break;
                }
                continue;
            }
        };

        let mut outcomes = Vec::new();
        let mut finish = None;
        for call in &parsed.calls {
            if let InteractionCall::Finish { answer } = call {
                finish = Some(answer.clone());
                break;
            }
            outcomes.push(execute_call(call, graph, index, cfg.retrieval_k));
        }
        let observation = if outcomes.is_empty() {
            String::new()
        } else {
            protocol::render_observation(step_index, &outcomes)
        };
        steps.push(TraceStep {
            index: step_index,
            reasoning: parsed.reasoning,
            calls: parsed.calls,
            observation,
        });

        if let Some(answer) = finish {
            final_answer = Some(answer);
            termination = Termination::Finished;
            break;
        }
    }

    AgentTrace {
        question: question.to_string(),
        steps,
        final_answer,
        termination,
        error,
        token_counts: tokens,
        wall_time: started.elapsed(),
    }
}

/// Execute one non-Finish call; failures become recoverable observations.
fn execute_call(
    call: &InteractionCall,
    graph: &Graph,
    index: &Bm25Index,
    retrieval_k: usize,
) -> CallOutcome {
    match call {
        InteractionCall::RetrieveNode { query } => match index.retrieve(query, retrieval_k) {
            Ok(hits) => CallOutcome::Retrieved(hits.into_iter().map(|h| h.node).collect()),
            Err(e) => CallOutcome::Error(e.to_string()),
        },
        InteractionCall::NodeFeature { id, feature } => match graph.node_feature(id, feature) {
            Ok(value) => CallOutcome::Feature(value.clone()),
            Err(e) => CallOutcome::Error(e.to_string()),
        },
        InteractionCall::NeighborCheck { id, edge_type } => {
            match graph.neighbor_check(id, edge_type) {
                Ok(list) => CallOutcome::Neighbors(list.to_vec()),
                Err(e) => CallOutcome::Error(e.to_string()),
            }
        }
        InteractionCall::NodeDegree { id, edge_type } => match graph.node_degree(id, edge_type) {
            Ok(degree) => CallOutcome::Degree(degree),
            Err(e) => CallOutcome::Error(e.to_string()),
        },
        InteractionCall::Finish { .. } => unreachable!("finish handled by the loop"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_sections_in_order() {
        let cfg = AgentConfig {
            demonstrations: vec!["Question: demo?\nReasoning 1: d.\nInteraction 1: Finish[x]".into()],
            graph_description: "There is one type of node.".into(),
            ..AgentConfig::default()
        };
        let messages = build_prompt("What is the year?", &cfg, &[]).unwrap();
        assert_eq!(messages.len(), 1);
        let text = &messages[0].content;
        let order = [
            "Solve a question answering task",
            "(1) RetrieveNode[keyword]",
            "You may take as many steps as necessary.",
            "Here are some examples:",
            "Question: demo?",
            "(END OF EXAMPLES)",
            "Definition of the graph: There is one type of node.",
            "Question: What is the year?",
            CLOSING_INSTRUCTION,
        ];
        let mut last = 0;
        for needle in order {
            let at = text[last..].find(needle).unwrap_or_else(|| panic!("missing {needle}"));
            last += at;
        }
    }

    #[test]
    fn zero_shot_prompt_still_well_formed() {
        let cfg = AgentConfig::default();
        let messages = build_prompt("q?", &cfg, &[]).unwrap();
        let text = &messages[0].content;
        assert!(text.contains("Here are some examples:\n\n(END OF EXAMPLES)"));
    }

    #[test]
    fn history_rendered_in_order() {
        let cfg = AgentConfig::default();
        let steps = vec![
            TraceStep {
                index: 1,
                reasoning: "find the node".into(),
                calls: vec![InteractionCall::RetrieveNode { query: "higgs".into() }],
                observation: "Execution 1: The ID of this node is p1.".into(),
            },
            TraceStep {
                index: 2,
                reasoning: "read the year".into(),
                calls: vec![InteractionCall::NodeFeature {
                    id: crate::graph::NodeId::new("p1").unwrap(),
                    feature: "year".into(),
                }],
                observation: "Execution 2: 1993".into(),
            },
        ];
        let text = &build_prompt("q?", &cfg, &steps).unwrap()[0].content;
        let expected = "Reasoning 1: find the node\nInteraction 1: RetrieveNode[higgs]\n\
                        Execution 1: The ID of this node is p1.\n\n\
                        Reasoning 2: read the year\nInteraction 2: NodeFeature[p1, year]\n\
                        Execution 2: 1993\n";
        assert!(text.ends_with(expected), "prompt suffix mismatch:\n{text}");
    }

    #[test]
    fn prompt_budget_enforced() {
        let cfg = AgentConfig { input_token_budget: 10, ..AgentConfig::default() };
        let err = build_prompt("q?", &cfg, &[]).unwrap_err();
        let AgentError::PromptOverBudget { tokens, budget, overflow } = err;
        assert_eq!(budget, 10);
        assert_eq!(overflow, tokens - 10);
    }
}
