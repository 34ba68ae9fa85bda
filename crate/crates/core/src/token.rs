//! Approximate token accounting.
//!
//! Budgets are enforced client-side without a model tokenizer, so a "token"
//! here is a whitespace-delimited word. That is deterministic, cheap, and
//! close enough for context-size bookkeeping.

/// Number of whitespace-delimited tokens in `text`.
pub fn count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Truncate `text` to at most `budget` tokens, cutting at a token boundary.
/// Returns the (possibly shortened) text and whether anything was dropped.
pub fn truncate(text: &str, budget: usize) -> (String, bool) {
    let total = count(text);
    if total <= budget {
        return (text.to_string(), false);
    }
    let mut end = 0;
    for word in text.split_whitespace().take(budget) {
        end = word.as_ptr() as usize - text.as_ptr() as usize + word.len();
    }
    (text[..end].to_string(), true)
}
