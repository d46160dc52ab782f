use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use eat_gateway::{ChatBackend, ChatTranscript, GatewayError, Role};

use crate::data::{ScriptedEntity, ScriptedSentence, SCRIPTS};

// Distinctive phrases of the default prompt wording, used to recognize
// which stage a transcript is at.
const EXTRACT_MARK: &str = "Label the named entities";
const FORWARD_ANALYSIS_MARK: &str = "think about the named entities";
const FORWARD_TRANSLATION_MARK: &str = "taking the previous analysis into account";
const BACKWARD_TRANSLATION_MARK: &str = "Translate the entity \"";
const BACKWARD_VERIFICATION_MARK: &str = "appears verbatim";
const FILTER_MARK: &str = "Output only the final answer";

/// A chat backend that answers from the [`SCRIPTS`] table.
///
/// It recognizes the stage from the last user turn, then identifies the
/// sentence (and entity, for backward prompts) by searching for their
/// text inside the prompt. Anything it cannot match fails with a
/// transport error, which doubles as failure injection: feed it a
/// sentence that is not in the table and the call fails.
#[derive(Debug, Default)]
pub struct ScriptedBackend;

impl ScriptedBackend {
    pub fn new() -> Self {
        ScriptedBackend
    }
}

fn find_by_source(text: &str) -> Option<&'static ScriptedSentence> {
    SCRIPTS.iter().find(|s| text.contains(&s.text()))
}

fn find_by_english(text: &str) -> Option<&'static ScriptedSentence> {
    SCRIPTS.iter().find(|s| text.contains(s.english))
}

fn find_entity(text: &str) -> Option<&'static ScriptedEntity> {
    let sentence = find_by_source(text)?;
    sentence.entities.iter().find(|e| text.contains(&format!("\"{}\"", e.english)))
}

impl ChatBackend for ScriptedBackend {
    fn id(&self) -> &str {
        "mock-llm"
    }

    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
        let users: Vec<&str> = transcript
            .turns()
            .iter()
            .filter(|m| m.role == Role::User)
            .map(|m| m.text.as_str())
            .collect();
        let last = *users
            .last()
            .ok_or_else(|| GatewayError::InvalidTranscript("no user turn to answer".into()))?;
        let first = users[0];

        let reply = if last.contains(EXTRACT_MARK) {
            find_by_english(last).map(|s| s.extraction)
        } else if last.contains(BACKWARD_TRANSLATION_MARK) {
            find_entity(last).map(|e| e.analysis)
        } else if last.contains(BACKWARD_VERIFICATION_MARK) {
            // The verification prompt names only the sentence; the entity
            // is identified from the opening prompt of the conversation.
            find_entity(first).map(|e| e.refined)
        } else if last.contains(FORWARD_ANALYSIS_MARK) {
            find_by_source(last).map(|s| s.analysis)
        } else if last.contains(FORWARD_TRANSLATION_MARK) {
            find_by_source(last).map(|s| s.translation)
        } else if last.contains(FILTER_MARK) {
            // The filter prompt is direction-agnostic; the opening prompt
            // tells forward from backward.
            if first.contains(BACKWARD_TRANSLATION_MARK) {
                find_entity(first).map(|e| e.candidate_reply)
            } else {
                find_by_source(first).map(|s| s.english_reply)
            }
        } else {
            None
        };

        reply.map(str::to_string).ok_or_else(|| {
            let snippet: String = last.chars().take(48).collect();
            GatewayError::Transport {
                attempts: 1,
                message: format!("no scripted reply for prompt starting {snippet:?}"),
            }
        })
    }
}

/// Wraps any backend to count calls and observe concurrency. An optional
/// per-call delay widens the window in which overlapping calls can be
/// seen, which parallelism tests need.
pub struct CountingBackend {
    inner: Arc<dyn ChatBackend>,
    delay: Option<Duration>,
    calls: AtomicUsize,
    live: AtomicUsize,
    peak: AtomicUsize,
}

impl CountingBackend {
    pub fn new(inner: Arc<dyn ChatBackend>) -> Self {
        CountingBackend {
            inner,
            delay: None,
            calls: AtomicUsize::new(0),
            live: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
        }
    }

    pub fn with_delay(inner: Arc<dyn ChatBackend>, delay: Duration) -> Self {
        let mut backend = CountingBackend::new(inner);
        backend.delay = Some(delay);
        backend
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Highest number of calls that were in flight at the same time.
    pub fn peak_concurrency(&self) -> usize {
        self.peak.load(Ordering::SeqCst)
    }
}

impl ChatBackend for CountingBackend {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let live_now = self.live.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(live_now, Ordering::SeqCst);
        if let Some(delay) = self.delay {
            std::thread::sleep(delay);
        }
        let result = self.inner.complete(transcript);
        self.live.fetch_sub(1, Ordering::SeqCst);
        result
    }
}
