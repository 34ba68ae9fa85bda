//! OpenAI-compatible chat-completions client with bounded retries.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{
    validate_messages, ChatBackend, ChatMessage, Completion, GenerationConfig, LlmError,
    StopReason,
};

/// Environment variables consulted for the API key, in order.
pub const API_KEY_ENV_VARS: &[&str] = &["GRAPHCOT_API_KEY", "OPENAI_API_KEY"];

/// Remote backend speaking the `/v1/chat/completions` wire shape.
///
/// Transient failures (connection errors, timeouts, 429, 5xx) are retried
/// with exponential backoff up to `max_retries` extra attempts; every call
/// resolves within `timeout * (max_retries + 1)` plus backoff sleeps.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    url: String,
    api_key: Option<String>,
    max_retries: u32,
    base_backoff: Duration,
    http: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
    max_tokens: u32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    stop: Vec<String>,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
    #[serde(default)]
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    #[serde(default)]
    content: String,
}

impl HttpBackend {
    /// `url` is the full chat-completions endpoint. The key, if any, is sent
    /// as a bearer token; use [`HttpBackend::api_key_from_env`] so keys stay
    /// out of config files and flags.
    pub fn new(url: impl Into<String>, api_key: Option<String>) -> Self {
        HttpBackend {
            url: url.into(),
            api_key,
            max_retries: 3,
            base_backoff: Duration::from_millis(250),
            http: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(60))
                .build()
                .expect("reqwest client builds"),
        }
    }

    pub fn with_retry(mut self, max_retries: u32, base_backoff: Duration) -> Self {
        self.max_retries = max_retries;
        self.base_backoff = base_backoff;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .expect("reqwest client builds");
        self
    }

    pub fn api_key_from_env() -> Option<String> {
        API_KEY_ENV_VARS
            .iter()
            .find_map(|var| std::env::var(var).ok())
            .filter(|key| !key.is_empty())
    }

    fn attempt(
        &self,
        messages: &[ChatMessage],
        cfg: &GenerationConfig,
    ) -> Result<Completion, AttemptError> {
        let body = ChatRequest {
            model: &cfg.model_name,
            messages,
            temperature: cfg.temperature,
            max_tokens: cfg.max_tokens,
            stop: cfg.stop_sequences.clone(),
        };
        let mut request = self.http.post(&self.url).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().map_err(|e| AttemptError::Transient(e.to_string()))?;
        let status = response.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            let text = response.text().unwrap_or_default();
            return Err(AttemptError::Fatal(LlmError::Auth(text)));
        }
        if status.is_server_error() || status.as_u16() == 429 {
            return Err(AttemptError::Transient(format!("status {status}")));
        }
        if !status.is_success() {
            let text = response.text().unwrap_or_default();
            return Err(AttemptError::Fatal(LlmError::Http {
                status: status.as_u16(),
                message: text,
            }));
        }
        let parsed: ChatResponse = response
            .json()
            .map_err(|e| AttemptError::Fatal(LlmError::Http {
                status: status.as_u16(),
                message: format!("bad response body: {e}"),
            }))?;
        let choice = parsed.choices.into_iter().next().ok_or(AttemptError::Fatal(LlmError::EmptyChoice))?;
        let stop = match choice.finish_reason.as_deref() {
            None | Some("stop") => StopReason::Stop,
            Some("length") => StopReason::Length,
            Some(other) => StopReason::Other(other.to_string()),
        };
        Ok(Completion { text: choice.message.content, stop })
    }
}

enum AttemptError {
    Transient(String),
    Fatal(LlmError),
}

impl ChatBackend for HttpBackend {
    fn complete(
        &self,
        messages: &[ChatMessage],
        cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError> {
        validate_messages(messages)?;
        let attempts = self.max_retries + 1;
        let mut last = String::new();
        for n in 0..attempts {
            match self.attempt(messages, cfg) {
                Ok(completion) => {
                    if completion.truncated() {
                        log::warn!("completion stopped at the length limit");
                    }
                    return Ok(completion);
                }
                Err(AttemptError::Fatal(err)) => return Err(err),
                Err(AttemptError::Transient(message)) => {
                    log::debug!("attempt {} failed: {message}", n + 1);
                    last = message;
                    if n + 1 < attempts {
                        std::thread::sleep(self.base_backoff * 2u32.pow(n));
                    }
                }
            }
        }
        Err(LlmError::Exhausted { attempts, message: last })
    }
}
