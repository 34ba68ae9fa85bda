//! Chat-completion backends.
//!
//! Everything that talks to an LLM goes through [`ChatBackend`], so agent
//! episodes, baselines, paraphrasing, and judging run identically against a
//! remote OpenAI-compatible endpoint ([`HttpBackend`]) or a replayed script
//! ([`ScriptedBackend`]).

mod http;
mod scripted;

pub use http::HttpBackend;
pub use scripted::{MatchMode, ScriptedBackend, ScriptedSession, Transcript, TranscriptEntry};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("backend request failed after {attempts} attempts: {message}")]
    Exhausted { attempts: u32, message: String },
    #[error("backend returned status {status}: {message}")]
    Http { status: u16, message: String },
    #[error("backend returned no completion choices")]
    EmptyChoice,
    #[error("message content must be non-empty for user and assistant roles")]
    EmptyMessage,
    #[error("scripted backend exhausted at step {step}")]
    ScriptExhausted { step: usize },
    #[error("scripted backend has no completion for step {step} (fingerprint {fingerprint})")]
    FingerprintMiss { step: usize, fingerprint: String },
    #[error("bad transcript: {0}")]
    BadTranscript(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("transcript JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }
}

/// Sampling settings shared by every backend. The default temperature is
/// exactly 0 so repeated runs stay comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub model_name: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub stop_sequences: Vec<String>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            model_name: "gpt-3.5-turbo".to_string(),
            temperature: 0.0,
            max_tokens: 1024,
            stop_sequences: Vec::new(),
        }
    }
}

impl GenerationConfig {
    pub fn for_model(model_name: impl Into<String>) -> Self {
        GenerationConfig { model_name: model_name.into(), ..Default::default() }
    }
}

/// Why the completion stopped. Length means the text was cut off, which is
/// never silently ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    Stop,
    Length,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub text: String,
    pub stop: StopReason,
}

impl Completion {
    pub fn truncated(&self) -> bool {
        self.stop == StopReason::Length
    }
}

/// A handle that turns a message list into a completion. Shareable across
/// threads; concurrent calls are allowed.
pub trait ChatBackend: Send + Sync {
    fn complete(
        &self,
        messages: &[ChatMessage],
        cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError>;
}

impl<B: ChatBackend + ?Sized> ChatBackend for &B {
    fn complete(
        &self,
        messages: &[ChatMessage],
        cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError> {
        (**self).complete(messages, cfg)
    }
}

pub(crate) fn validate_messages(messages: &[ChatMessage]) -> Result<(), LlmError> {
    for message in messages {
        if message.role != Role::System && message.content.is_empty() {
            return Err(LlmError::EmptyMessage);
        }
    }
    Ok(())
}

/// Prompt fingerprint used by scripted transcripts: SHA-256 over the
/// concatenated message contents with whitespace runs collapsed, so
/// re-wrapped fixtures still match.
pub fn fingerprint(messages: &[ChatMessage]) -> String {
    let mut normalized = String::new();
    for message in messages {
        for word in message.content.split_whitespace() {
            if !normalized.is_empty() {
                normalized.push(' ');
            }
            normalized.push_str(word);
        }
    }
    let digest = Sha256::digest(normalized.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}
