use std::sync::Arc;

use crate::digest::transcript_digest;
use crate::error::GatewayError;
use crate::fixture::{FixtureRecord, FixtureStore};
use crate::message::ChatTranscript;

/// Anything that can complete a chat transcript. Implementations must be
/// safe to call from several worker threads at once.
pub trait ChatBackend: Send + Sync {
    /// Identifier mixed into request digests — for the live backend this
    /// is the model name, and a replay store only matches when it was
    /// recorded under the same id.
    fn id(&self) -> &str;

    /// Completes a transcript that ends on a user turn, returning the
    /// assistant's reply text.
    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError>;
}

fn check_ready(transcript: &ChatTranscript) -> Result<(), GatewayError> {
    if !transcript.awaits_reply() {
        return Err(GatewayError::InvalidTranscript(
            "transcript must end on a user turn to be completed".into(),
        ));
    }
    Ok(())
}

/// Serves recorded replies only; any request without a fixture is an
/// error carrying the missing digest.
pub struct ReplayBackend {
    store: FixtureStore,
    id: String,
}

impl ReplayBackend {
    pub fn new(store: FixtureStore, id: impl Into<String>) -> Self {
        ReplayBackend { store, id: id.into() }
    }
}

impl ChatBackend for ReplayBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
        check_ready(transcript)?;
        let digest = transcript_digest(transcript);
        match self.store.load(&digest)? {
            Some(record) => Ok(record.reply),
            None => Err(GatewayError::ReplayMiss { digest }),
        }
    }
}

/// Wraps another backend and persists every new exchange to a store.
/// Cache-first: a request whose digest is already recorded is served from
/// the store without touching the inner backend, so re-recording an
/// interrupted run only pays for the missing tail.
pub struct RecordingBackend {
    inner: Arc<dyn ChatBackend>,
    store: FixtureStore,
}

impl RecordingBackend {
    pub fn new(inner: Arc<dyn ChatBackend>, store: FixtureStore) -> Self {
        RecordingBackend { inner, store }
    }
}

impl ChatBackend for RecordingBackend {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
        check_ready(transcript)?;
        let digest = transcript_digest(transcript);
        if let Some(record) = self.store.load(&digest)? {
            return Ok(record.reply);
        }
        let reply = self.inner.complete(transcript)?;
        let record = FixtureRecord {
            digest: digest.clone(),
            request: serde_json::to_value(transcript).expect("transcripts serialize"),
            reply: reply.clone(),
        };
        self.store.save(&record)?;
        Ok(reply)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::RequestParams;
    use std::sync::atomic::{AtomicU32, Ordering};

    /// Echoes the last user turn, counting calls.
    struct Echo {
        calls: AtomicU32,
    }

    impl ChatBackend for Echo {
        fn id(&self) -> &str {
            "echo"
        }

        fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            Ok(format!("re: {}", transcript.turns().last().unwrap().text))
        }
    }

    fn ask(backend: &dyn ChatBackend, text: &str) -> Result<String, GatewayError> {
        let mut t = ChatTranscript::new(backend.id(), RequestParams::default());
        t.push_user(text).unwrap();
        backend.complete(&t)
    }

    #[test]
    fn recording_then_replaying_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        let echo = Arc::new(Echo { calls: AtomicU32::new(0) });
        let recorder = RecordingBackend::new(echo.clone(), store);

        assert_eq!(ask(&recorder, "one").unwrap(), "re: one");
        assert_eq!(ask(&recorder, "two").unwrap(), "re: two");
        assert_eq!(echo.calls.load(Ordering::SeqCst), 2);

        // Cache-first: repeating a recorded request skips the inner backend.
        assert_eq!(ask(&recorder, "one").unwrap(), "re: one");
        assert_eq!(echo.calls.load(Ordering::SeqCst), 2);

        let replay = ReplayBackend::new(FixtureStore::open(dir.path()).unwrap(), "echo");
        assert_eq!(ask(&replay, "one").unwrap(), "re: one");
        assert_eq!(ask(&replay, "two").unwrap(), "re: two");
    }

    #[test]
    fn replay_miss_carries_the_digest() {
        let dir = tempfile::tempdir().unwrap();
        let replay = ReplayBackend::new(FixtureStore::create(dir.path()).unwrap(), "echo");
        let err = ask(&replay, "never recorded").unwrap_err();
        let digest = err.replay_miss_digest().expect("should be a replay miss");
        assert_eq!(digest.len(), 64);
    }

    #[test]
    fn replay_under_a_different_backend_id_misses() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        let echo = Arc::new(Echo { calls: AtomicU32::new(0) });
        let recorder = RecordingBackend::new(echo, store);
        ask(&recorder, "q").unwrap();

        let replay = ReplayBackend::new(FixtureStore::open(dir.path()).unwrap(), "other-model");
        assert!(matches!(ask(&replay, "q"), Err(GatewayError::ReplayMiss { .. })));
    }

    #[test]
    fn incomplete_transcripts_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let replay = ReplayBackend::new(FixtureStore::create(dir.path()).unwrap(), "echo");
        let t = ChatTranscript::new("echo", RequestParams::default());
        assert!(matches!(replay.complete(&t), Err(GatewayError::InvalidTranscript(_))));
    }
}
