//! LLM paraphrasing of question templates, giving each template several
//! distinct expressions.

use crate::llm::{ChatBackend, ChatMessage, GenerationConfig};

use super::template::{slots_of, QuestionTemplate};
use super::BenchError;

/// Instruction sent ahead of the template.
pub const PARAPHRASE_PROMPT: &str = "Paraphrase the given template in four different ways. \
Keep the name in `{}' unchanged, don't use ' in question, and use the same format \
(`question string', `answer string'):";

pub const PARAPHRASE_COUNT: usize = 4;
const RETRY_LIMIT: usize = 3;

pub fn paraphrase_prompt(template: &QuestionTemplate) -> Vec<ChatMessage> {
    vec![ChatMessage::user(format!(
        "{PARAPHRASE_PROMPT}\n\n(`{}', `{}')",
        template.question, template.answer
    ))]
}

/// Ask the backend for four rewrites of the template's question. Rewrites
/// must preserve every `{placeholder}` verbatim; batches that lose one are
/// rejected and re-requested up to a small retry bound.
pub fn paraphrase_template(
    template: &QuestionTemplate,
    backend: &dyn ChatBackend,
    generation: &GenerationConfig,
) -> Result<Vec<String>, BenchError> {
    let slots = slots_of(&template.question);
    let messages = paraphrase_prompt(template);
    for _ in 0..RETRY_LIMIT {
        let completion = backend.complete(&messages, generation)?;
        let candidates = parse_rewrites(&completion.text);
        let valid: Vec<String> = candidates
            .into_iter()
            .filter(|candidate| {
                slots.iter().all(|slot| candidate.contains(&format!("{{{slot}}}")))
            })
            .take(PARAPHRASE_COUNT)
            .collect();
        if valid.len() == PARAPHRASE_COUNT {
            return Ok(valid);
        }
    }
    Err(BenchError::ParaphraseFailed { attempts: RETRY_LIMIT })
}

/// Pull question strings out of a completion: one rewrite per non-empty
/// line, tolerating list numbering and the `(`question', `answer')` format.
fn parse_rewrites(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|line| {
            let line = strip_listing(line.trim());
            if line.is_empty() {
                return None;
            }
            Some(extract_question(line))
        })
        .filter(|q| !q.is_empty())
        .collect()
}

fn strip_listing(line: &str) -> &str {
    let no_digits = line.trim_start_matches(|c: char| c.is_ascii_digit());
    if no_digits.len() != line.len() {
        return no_digits.trim_start_matches(['.', ')', ':']).trim_start();
    }
    line.strip_prefix(['-', '*']).map_or(line, str::trim_start)
}

fn extract_question(line: &str) -> String {
    let inner = line
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or(line);
    // "(`question', `answer')": the question part ends at the `', ` boundary
    let question_part = inner.split("', ").next().unwrap_or(inner);
    question_part.trim_matches(['`', '\'', '"']).trim().to_string()
}
