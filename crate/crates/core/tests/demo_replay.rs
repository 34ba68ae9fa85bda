//! Replay the shipped academic demo transcripts end to end through the
//! agent loop against the fixture graph.

use std::path::PathBuf;

use graphcot::agent::{run_episode, AgentConfig, Termination};
use graphcot::graph::Graph;
use graphcot::llm::{ScriptedBackend, Transcript};
use graphcot::retrieval::{Bm25Index, IndexConfig};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/academic-demo")
}

fn load_graph() -> Graph {
    Graph::load_files(
        &fixture_dir().join("graph.json"),
        &fixture_dir().join("graph.manifest.json"),
        true,
    )
    .expect("demo fixture loads strict")
    .0
}

fn agent_config(graph: &Graph) -> AgentConfig {
    AgentConfig {
        graph_description: graph.description().to_string(),
        ..AgentConfig::default()
    }
}

fn replay(question: &str, transcript: &str) -> graphcot::agent::AgentTrace {
    let graph = load_graph();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    let backend = ScriptedBackend::load(&fixture_dir().join("transcripts").join(transcript)).unwrap();
    let session = backend.session();
    run_episode(question, &graph, &index, &session, &agent_config(&graph))
}

#[test]
fn year_question_replays_to_1993() {
    let trace = replay(
        "When was the paper Strongly Interacting Higgs Sector in the Minimal Standard Model published?",
        "acad-demo-0001.json",
    );
    assert_eq!(trace.termination, Termination::Finished);
    assert_eq!(trace.final_answer.as_deref(), Some("1993"));
    assert_eq!(trace.steps.len(), 3);
    assert_eq!(
        trace.steps[0].observation,
        "Execution 1: The ID of this node is 3101448248."
    );
    assert_eq!(trace.steps[1].observation, "Execution 2: 1993");
}

#[test]
fn author_count_question_replays_to_2() {
    let trace = replay(
        "How many authors do the paper Mass Accretion Rates in Self-Regulated Disks of T Tauri Stars have?",
        "acad-demo-0002.json",
    );
    assert_eq!(trace.termination, Termination::Finished);
    assert_eq!(trace.final_answer.as_deref(), Some("2"));
    assert_eq!(trace.steps.len(), 3);
    assert_eq!(trace.steps[1].observation, "Execution 2: 2");
}

#[test]
fn venue_question_replays_to_both_journals() {
    let trace = replay(
        "What was the publish venue of the paper Mass Accretion Rates in Self-Regulated Disks of T Tauri Stars?",
        "acad-demo-0003.json",
    );
    assert_eq!(trace.termination, Termination::Finished);
    assert_eq!(
        trace.final_answer.as_deref(),
        Some("the astrophysical journal, the atmosphere journal")
    );
    assert_eq!(trace.steps.len(), 4);
    assert_eq!(trace.steps[1].observation, "Execution 2: ['1980519', '1053242']");
    assert_eq!(
        trace.steps[2].observation,
        "Execution 3: the astrophysical journal, the atmosphere journal"
    );
}

#[test]
fn script_without_finish_hits_max_steps() {
    let graph = load_graph();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    let completions: Vec<String> = (1..=8)
        .map(|i| format!("Reasoning {i}: still looking.\nInteraction {i}: NodeDegree[2090642949, author]"))
        .collect();
    let backend = ScriptedBackend::new(Transcript::positional(completions));
    let session = backend.session();
    let cfg = AgentConfig { max_iterations: 4, ..agent_config(&graph) };
    let trace = run_episode("unanswerable?", &graph, &index, &session, &cfg);
    assert_eq!(trace.termination, Termination::MaxSteps);
    assert!(trace.final_answer.is_none());
    assert_eq!(trace.steps.len(), 4);
    assert_eq!(trace.prediction(), "");
}

#[test]
fn repeated_parse_failures_terminate() {
    let graph = load_graph();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    let completions: Vec<String> =
        (0..5).map(|_| "I am not sure what to do next.".to_string()).collect();
    let backend = ScriptedBackend::new(Transcript::positional(completions));
    let session = backend.session();
    let cfg = AgentConfig { parse_error_limit: 2, ..agent_config(&graph) };
    let trace = run_episode("anything?", &graph, &index, &session, &cfg);
    assert_eq!(trace.termination, Termination::ParseFailure);
    assert_eq!(trace.steps.len(), 3);
    for step in &trace.steps {
        assert!(step.observation.ends_with("Error: could not parse interaction."));
    }
}

#[test]
fn episode_is_bit_deterministic() {
    let run = || {
        let trace = replay(
            "What was the publish venue of the paper Mass Accretion Rates in Self-Regulated Disks of T Tauri Stars?",
            "acad-demo-0003.json",
        );
        serde_json::to_string(&trace).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn backend_failure_preserves_partial_trace() {
    let graph = load_graph();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    // script ends after one step; the second backend call fails
    let backend = ScriptedBackend::new(Transcript::positional(vec![
        "Reasoning 1: find it.\nInteraction 1: RetrieveNode[Strongly Interacting Higgs Sector in the Minimal Standard Model]".to_string(),
    ]));
    let session = backend.session();
    let trace = run_episode("q?", &graph, &index, &session, &agent_config(&graph));
    assert_eq!(trace.termination, Termination::BackendFailure);
    assert_eq!(trace.steps.len(), 1);
    assert!(trace.error.is_some());
}

#[test]
fn errors_are_recoverable_observations() {
    let graph = load_graph();
    let index = Bm25Index::build(&graph, &IndexConfig::default_for(&graph)).unwrap();
    let backend = ScriptedBackend::new(Transcript::positional(vec![
        "Reasoning 1: check a bogus node.\nInteraction 1: NodeFeature[999, year]".to_string(),
        "Reasoning 2: give up gracefully.\nInteraction 2: Finish[unknown]".to_string(),
    ]));
    let session = backend.session();
    let trace = run_episode("q?", &graph, &index, &session, &agent_config(&graph));
    assert_eq!(trace.termination, Termination::Finished);
    assert!(trace.steps[0].observation.starts_with("Execution 1: Error:"));
}
