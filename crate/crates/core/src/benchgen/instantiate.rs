//! Turning templates into concrete samples by sampling the graph.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::chain::{run_chain, ChainContext, ChainFailure, ChainStep, Env, SampleSource};
use super::dataset::QASample;
use super::template::{slots_of, AnswerSource, QuestionTemplate};
use super::BenchError;

#[derive(Debug, Clone)]
pub struct InstantiateOutcome {
    pub samples: Vec<QASample>,
    pub requested: usize,
    /// Chain runs that aborted on a precondition and were resampled.
    pub aborted: usize,
}

impl InstantiateOutcome {
    pub fn shortfall(&self) -> usize {
        self.requested.saturating_sub(self.samples.len())
    }
}

/// Produce up to `n` samples with distinct bindings. Chain runs that fail a
/// precondition are dropped and resampled; a graph too small to yield `n`
/// distinct samples returns a partial list (check
/// [`InstantiateOutcome::shortfall`]).
pub fn instantiate(
    template: &QuestionTemplate,
    graph: &Graph,
    n: usize,
    seed: u64,
) -> Result<InstantiateOutcome, BenchError> {
    let mut ctx = ChainContext::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expressions = template.expressions();
    let sample_binds = sampling_binds(&template.chain);

    let mut samples = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut aborted = 0usize;
    let max_attempts = n.saturating_mul(60).saturating_add(200);

    for _ in 0..max_attempts {
        if samples.len() == n {
            break;
        }
        let env = match run_chain(&mut ctx, &template.chain, &mut SampleSource::Random(&mut rng)) {
            Ok(env) => env,
            Err(ChainFailure::Abort(_)) => {
                aborted += 1;
                continue;
            }
            Err(ChainFailure::Error(message)) => {
                return Err(BenchError::ChainConfig { template: template.id.clone(), message })
            }
        };

        let expression = expressions[samples.len() % expressions.len()];
        let question = fill_slots(expression, &env, template)?;
        let answer = match template.answer_source {
            AnswerSource::Chain => fill_slots(&template.answer, &env, template)?,
            AnswerSource::Curated => String::new(),
        };
        let bindings = stored_bindings(template, &sample_binds, &env, expression)?;

        let fingerprint = serde_json::to_string(&bindings).expect("bindings serialize");
        if !seen.insert(fingerprint) {
            continue;
        }
        let qid = format!("{}-{:04}", template.id, samples.len() + 1);
        samples.push(QASample {
            qid,
            question,
            answer,
            difficulty: template.difficulty,
            template_id: template.id.clone(),
            graph_id: graph.manifest().graph_id.clone(),
            answer_source: template.answer_source,
            bindings,
        });
    }

    Ok(InstantiateOutcome { samples, requested: n, aborted })
}

/// Re-run the chain with a sample's stored bindings and return the answer
/// it produces; the ground-truth soundness check compares this with the
/// stored answer.
pub fn replay_answer(
    template: &QuestionTemplate,
    graph: &Graph,
    bindings: &BTreeMap<String, String>,
) -> Result<String, BenchError> {
    let mut ctx = ChainContext::new(graph);
    let env = run_chain(&mut ctx, &template.chain, &mut SampleSource::Replay(bindings)).map_err(
        |failure| BenchError::ChainConfig {
            template: template.id.clone(),
            message: failure.to_string(),
        },
    )?;
    fill_slots(&template.answer, &env, template)
}

/// Binding names produced by sampling steps; storing them makes replay
/// deterministic.
fn sampling_binds(chain: &[ChainStep]) -> Vec<String> {
    chain
        .iter()
        .filter_map(|step| match step {
            ChainStep::SampleNode { bind, .. } | ChainStep::SampleFrom { bind, .. } => {
                Some(bind.clone())
            }
            _ => None,
        })
        .collect()
}

fn fill_slots(
    pattern: &str,
    env: &Env,
    template: &QuestionTemplate,
) -> Result<String, BenchError> {
    let mut out = pattern.to_string();
    for slot in slots_of(pattern) {
        let value = env
            .get(&slot)
            .and_then(|v| v.to_text())
            .ok_or_else(|| BenchError::UnboundSlot {
                template: template.id.clone(),
                slot: slot.clone(),
            })?;
        out = out.replace(&format!("{{{slot}}}"), &value);
    }
    Ok(out)
}

fn stored_bindings(
    template: &QuestionTemplate,
    sample_binds: &[String],
    env: &Env,
    expression: &str,
) -> Result<BTreeMap<String, String>, BenchError> {
    let mut bindings = BTreeMap::new();
    let mut wanted: Vec<String> = sample_binds.to_vec();
    wanted.extend(slots_of(expression));
    wanted.extend(slots_of(&template.answer));
    for name in wanted {
        if bindings.contains_key(&name) {
            continue;
        }
        let value = env
            .get(&name)
            .and_then(|v| v.to_text())
            .ok_or_else(|| BenchError::UnboundSlot {
                template: template.id.clone(),
                slot: name.clone(),
            })?;
        bindings.insert(name, value);
    }
    Ok(bindings)
}
