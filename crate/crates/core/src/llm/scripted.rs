//! Deterministic scripted backend replaying canned completions.
//!
//! A transcript file is a JSON list of
//! `{"match": "positional" | "fingerprint", "key": "...", "completion": "..."}`.
//! A file is entirely positional or entirely fingerprint-keyed. Positional
//! replay keeps one cursor per session, so each episode must be given its
//! own [`ScriptedSession`]. Requesting past the end of the script is an
//! error, never silence.

use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{
    fingerprint, validate_messages, ChatBackend, ChatMessage, Completion, GenerationConfig,
    LlmError, StopReason,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    Positional,
    Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    #[serde(rename = "match")]
    pub match_mode: MatchMode,
    /// Fingerprint hex for fingerprint mode; informational step number for
    /// positional mode.
    #[serde(default)]
    pub key: String,
    pub completion: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
    mode: MatchMode,
}

impl Transcript {
    pub fn new(entries: Vec<TranscriptEntry>) -> Result<Self, LlmError> {
        let mode = entries
            .first()
            .map(|e| e.match_mode)
            .unwrap_or(MatchMode::Positional);
        if entries.iter().any(|e| e.match_mode != mode) {
            return Err(LlmError::BadTranscript(
                "a transcript file must use a single match mode".to_string(),
            ));
        }
        Ok(Transcript { entries, mode })
    }

    /// Positional transcript from plain completions, one per step.
    pub fn positional(completions: impl IntoIterator<Item = String>) -> Self {
        let entries = completions
            .into_iter()
            .enumerate()
            .map(|(i, completion)| TranscriptEntry {
                match_mode: MatchMode::Positional,
                key: (i + 1).to_string(),
                completion,
            })
            .collect();
        Transcript { entries, mode: MatchMode::Positional }
    }

    pub fn from_json(json: &str) -> Result<Self, LlmError> {
        let entries: Vec<TranscriptEntry> = serde_json::from_str(json)?;
        Transcript::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        Transcript::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.entries).expect("transcript serializes");
        out.push('\n');
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Owner of a loaded transcript; hand one [`ScriptedSession`] to each episode.
#[derive(Debug)]
pub struct ScriptedBackend {
    transcript: Arc<Transcript>,
}

impl ScriptedBackend {
    pub fn new(transcript: Transcript) -> Self {
        ScriptedBackend { transcript: Arc::new(transcript) }
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        Ok(ScriptedBackend::new(Transcript::load(path)?))
    }

    /// A fresh replay cursor; one per episode.
    pub fn session(&self) -> ScriptedSession {
        ScriptedSession { transcript: Arc::clone(&self.transcript), cursor: Mutex::new(0) }
    }
}

/// One replay cursor over a transcript.
#[derive(Debug)]
pub struct ScriptedSession {
    transcript: Arc<Transcript>,
    cursor: Mutex<usize>,
}

impl ChatBackend for ScriptedSession {
    fn complete(
        &self,
        messages: &[ChatMessage],
        _cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError> {
        validate_messages(messages)?;
        let mut cursor = self.cursor.lock().expect("cursor lock");
        let step = *cursor + 1;
        match self.transcript.mode {
            MatchMode::Positional => {
                let entry = self
                    .transcript
                    .entries
                    .get(*cursor)
                    .ok_or(LlmError::ScriptExhausted { step })?;
                *cursor += 1;
                Ok(Completion { text: entry.completion.clone(), stop: StopReason::Stop })
            }
            MatchMode::Fingerprint => {
                let wanted = fingerprint(messages);
                let entry = self
                    .transcript
                    .entries
                    .iter()
                    .find(|e| e.key == wanted)
                    .ok_or(LlmError::FingerprintMiss { step, fingerprint: wanted.clone() })?;
                *cursor += 1;
                Ok(Completion { text: entry.completion.clone(), stop: StopReason::Stop })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_replay_in_order_then_exhausts() {
        let backend = ScriptedBackend::new(Transcript::positional(vec![
            "first".to_string(),
            "second".to_string(),
        ]));
        let session = backend.session();
        let cfg = GenerationConfig::default();
        let messages = [ChatMessage::user("anything")];
        assert_eq!(session.complete(&messages, &cfg).unwrap().text, "first");
        assert_eq!(session.complete(&messages, &cfg).unwrap().text, "second");
        assert!(matches!(
            session.complete(&messages, &cfg),
            Err(LlmError::ScriptExhausted { step: 3 })
        ));
    }

    #[test]
    fn sessions_have_independent_cursors() {
        let backend = ScriptedBackend::new(Transcript::positional(vec!["only".to_string()]));
        let cfg = GenerationConfig::default();
        let messages = [ChatMessage::user("x")];
        let a = backend.session();
        let b = backend.session();
        assert_eq!(a.complete(&messages, &cfg).unwrap().text, "only");
        assert_eq!(b.complete(&messages, &cfg).unwrap().text, "only");
    }

    #[test]
    fn fingerprint_matching_and_miss() {
        let messages = [ChatMessage::user("what	 is  the\nyear")];
        let entry = TranscriptEntry {
            match_mode: MatchMode::Fingerprint,
            key: fingerprint(&messages),
            completion: "Reasoning 1: done".to_string(),
        };
        let backend = ScriptedBackend::new(Transcript::new(vec![entry]).unwrap());
        let session = backend.session();
        let cfg = GenerationConfig::default();
        // same words, different whitespace
        let same = [ChatMessage::user("what is the year")];
        assert_eq!(session.complete(&same, &cfg).unwrap().text, "Reasoning 1: done");
        let other = [ChatMessage::user("different prompt")];
        assert!(matches!(
            session.complete(&other, &cfg),
            Err(LlmError::FingerprintMiss { step: 2, .. })
        ));
    }

    #[test]
    fn mixed_mode_transcript_rejected() {
        let entries = vec![
            TranscriptEntry {
                match_mode: MatchMode::Positional,
                key: "1".to_string(),
                completion: "a".to_string(),
            },
            TranscriptEntry {
                match_mode: MatchMode::Fingerprint,
                key: "deadbeef".to_string(),
                completion: "b".to_string(),
            },
        ];
        assert!(matches!(Transcript::new(entries), Err(LlmError::BadTranscript(_))));
    }

    #[test]
    fn transcript_json_round_trip() {
        let t = Transcript::positional(vec!["a".to_string(), "b".to_string()]);
        let json = t.to_json();
        assert_eq!(Transcript::from_json(&json).unwrap(), t);
    }
}
