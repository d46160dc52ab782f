use serde::Serialize;

use crate::error::GatewayError;

/// Speaker of one chat turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

/// One chat turn. Text is non-empty for user and assistant turns (enforced
/// by [`ChatTranscript`]'s push methods).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChatMessage {
    pub role: Role,
    pub text: String,
}

/// Decoding parameters sent with every request and included in replay
/// digests. Defaults to greedy decoding with a 512-token output budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RequestParams {
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for RequestParams {
    fn default() -> Self {
        RequestParams { temperature: 0.0, max_tokens: 512 }
    }
}

/// An alternating conversation addressed to one backend.
///
/// Invariants, enforced at construction and push time: at most one system
/// turn, and only first; the first non-system turn is a user turn; user
/// and assistant turns then strictly alternate; no turn is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatTranscript {
    backend_id: String,
    params: RequestParams,
    turns: Vec<ChatMessage>,
}

impl ChatTranscript {
    pub fn new(backend_id: impl Into<String>, params: RequestParams) -> Self {
        ChatTranscript { backend_id: backend_id.into(), params, turns: Vec::new() }
    }

    pub fn backend_id(&self) -> &str {
        &self.backend_id
    }

    pub fn params(&self) -> RequestParams {
        self.params
    }

    pub fn turns(&self) -> &[ChatMessage] {
        &self.turns
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    /// Adds the optional leading system turn.
    pub fn push_system(&mut self, text: impl Into<String>) -> Result<(), GatewayError> {
        if !self.turns.is_empty() {
            return Err(GatewayError::InvalidTranscript(
                "a system turn is only allowed first".into(),
            ));
        }
        let text = text.into();
        if text.is_empty() {
            return Err(GatewayError::InvalidTranscript("system turn is empty".into()));
        }
        self.turns.push(ChatMessage { role: Role::System, text });
        Ok(())
    }

    pub fn push_user(&mut self, text: impl Into<String>) -> Result<(), GatewayError> {
        self.push_speaker(Role::User, text.into())
    }

    pub fn push_assistant(&mut self, text: impl Into<String>) -> Result<(), GatewayError> {
        self.push_speaker(Role::Assistant, text.into())
    }

    fn push_speaker(&mut self, role: Role, text: String) -> Result<(), GatewayError> {
        if text.is_empty() {
            return Err(GatewayError::InvalidTranscript(format!(
                "{} turn is empty",
                role.as_str()
            )));
        }
        let last_speaker = self
            .turns
            .iter()
            .rev()
            .find(|m| m.role != Role::System)
            .map(|m| m.role);
        let expected = match last_speaker {
            None => Role::User,
            Some(Role::User) => Role::Assistant,
            Some(Role::Assistant) => Role::User,
            Some(Role::System) => unreachable!("system turns are filtered above"),
        };
        if role != expected {
            return Err(GatewayError::InvalidTranscript(format!(
                "expected a {} turn next, got {}",
                expected.as_str(),
                role.as_str()
            )));
        }
        self.turns.push(ChatMessage { role, text });
        Ok(())
    }

    /// True when the transcript is ready to be completed: non-empty and
    /// ending on a user turn.
    pub fn awaits_reply(&self) -> bool {
        matches!(self.turns.last(), Some(m) if m.role == Role::User)
    }
}
