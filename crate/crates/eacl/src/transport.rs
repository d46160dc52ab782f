use std::time::Duration;

use crate::fixture::{wiki_digest, WikiFixtureRecord, WikiFixtureStore};
use crate::USER_AGENT_ENV;

/// One GET request. Returns `(status, body)` for anything the server
/// said, `Err` only when no response arrived at all; the caller decides
/// what non-200 statuses mean.
pub trait WikiTransport: Send + Sync {
    fn get(&self, url: &str) -> Result<(u16, String), String>;
}

/// Live HTTPS transport.
pub struct HttpWikiTransport {
    client: reqwest::blocking::Client,
}

impl HttpWikiTransport {
    /// Builds the live transport. The User-Agent comes from `EAT_WIKI_UA`
    /// when set (Wikipedia asks bots to identify themselves); otherwise a
    /// generic default is used.
    pub fn from_env() -> Result<Self, String> {
        let user_agent = std::env::var(USER_AGENT_ENV)
            .unwrap_or_else(|_| "eat-eacl-harvester/0.1 (corpus builder)".to_string());
        let client = reqwest::blocking::Client::builder()
            .user_agent(user_agent)
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| format!("could not build HTTP client: {e}"))?;
        Ok(HttpWikiTransport { client })
    }
}

impl WikiTransport for HttpWikiTransport {
    fn get(&self, url: &str) -> Result<(u16, String), String> {
        let response = self.client.get(url).send().map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body = response.text().map_err(|e| e.to_string())?;
        Ok((status, body))
    }
}

/// Serves recorded responses only; a request without a fixture is a
/// transport error naming the missing digest.
pub struct ReplayWikiTransport {
    store: WikiFixtureStore,
}

impl ReplayWikiTransport {
    pub fn new(store: WikiFixtureStore) -> Self {
        ReplayWikiTransport { store }
    }
}

impl WikiTransport for ReplayWikiTransport {
    fn get(&self, url: &str) -> Result<(u16, String), String> {
        let digest = wiki_digest(url);
        match self.store.load(&digest).map_err(|e| e.to_string())? {
            Some(record) => Ok((record.status, record.body)),
            None => Err(format!("no recorded response for {url} (digest {digest})")),
        }
    }
}

/// Wraps another transport and persists every new response. Cache-first,
/// like the chat gateway's recorder: re-recording an interrupted harvest
/// only pays for what is missing.
pub struct RecordingWikiTransport {
    inner: Box<dyn WikiTransport>,
    store: WikiFixtureStore,
}

impl RecordingWikiTransport {
    pub fn new(inner: Box<dyn WikiTransport>, store: WikiFixtureStore) -> Self {
        RecordingWikiTransport { inner, store }
    }
}

impl WikiTransport for RecordingWikiTransport {
    fn get(&self, url: &str) -> Result<(u16, String), String> {
        let digest = wiki_digest(url);
        if let Some(record) = self.store.load(&digest).map_err(|e| e.to_string())? {
            return Ok((record.status, record.body));
        }
        let (status, body) = self.inner.get(url)?;
        let record = WikiFixtureRecord { digest, url: url.to_string(), status, body: body.clone() };
        self.store.save(&record).map_err(|e| e.to_string())?;
        Ok((status, body))
    }
}
