use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use crate::backend::ChatBackend;
use crate::error::GatewayError;
use crate::message::ChatTranscript;
use crate::retry::{is_retryable_status, RetryPolicy};

/// Environment variable holding the API base URL, e.g.
/// `https://api.example.com` (the `/v1/chat/completions` path is appended).
pub const API_BASE_ENV: &str = "EAT_API_BASE";
/// Environment variable holding the bearer token; optional for servers
/// that do not authenticate.
pub const API_KEY_ENV: &str = "EAT_API_KEY";

/// Minimal blocking HTTP surface the chat backend needs; split out so
/// tests can script statuses and bodies without a server.
pub trait HttpTransport: Send + Sync {
    /// POSTs a JSON body, returning `(status, response body)`. `Err` is a
    /// transport-level failure (connect, timeout); HTTP error statuses
    /// come back as `Ok`.
    fn post_json(
        &self,
        url: &str,
        bearer: Option<&str>,
        body: &str,
    ) -> Result<(u16, String), String>;
}

/// Production transport over a blocking reqwest client.
pub struct ReqwestTransport {
    client: reqwest::blocking::Client,
}

impl ReqwestTransport {
    pub fn new(timeout: Duration) -> Result<Self, GatewayError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| GatewayError::Config(format!("building HTTP client: {e}")))?;
        Ok(ReqwestTransport { client })
    }
}

impl HttpTransport for ReqwestTransport {
    fn post_json(
        &self,
        url: &str,
        bearer: Option<&str>,
        body: &str,
    ) -> Result<(u16, String), String> {
        let mut request = self
            .client
            .post(url)
            .header("content-type", "application/json")
            .body(body.to_string());
        if let Some(token) = bearer {
            request = request.bearer_auth(token);
        }
        let response = request.send().map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let text = response.text().map_err(|e| e.to_string())?;
        Ok((status, text))
    }
}

/// Counting semaphore bounding in-flight requests across worker threads.
struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Semaphore { permits: Mutex::new(permits.max(1)), available: Condvar::new() }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.available.wait(permits).unwrap();
        }
        *permits -= 1;
        SemaphoreGuard { semaphore: self }
    }
}

struct SemaphoreGuard<'a> {
    semaphore: &'a Semaphore,
}

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.semaphore.permits.lock().unwrap();
        *permits += 1;
        self.semaphore.available.notify_one();
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    content: Option<String>,
}

/// Live backend speaking the OpenAI-compatible chat-completion protocol.
///
/// Retries transport failures and retryable statuses (429, 5xx) with
/// exponential backoff; other error statuses fail immediately. A counting
/// semaphore caps requests in flight regardless of pipeline parallelism.
pub struct HttpBackend {
    transport: Box<dyn HttpTransport>,
    completions_url: String,
    api_key: Option<String>,
    model: String,
    retry: RetryPolicy,
    inflight: Semaphore,
}

impl HttpBackend {
    pub fn new(
        transport: Box<dyn HttpTransport>,
        base_url: &str,
        api_key: Option<String>,
        model: impl Into<String>,
        retry: RetryPolicy,
        max_inflight: usize,
    ) -> Self {
        let completions_url = format!("{}/v1/chat/completions", base_url.trim_end_matches('/'));
        HttpBackend {
            transport,
            completions_url,
            api_key,
            model: model.into(),
            retry,
            inflight: Semaphore::new(max_inflight),
        }
    }

    /// Builds a live backend from `EAT_API_BASE` / `EAT_API_KEY`, with a
    /// 120 s request timeout. Credentials never travel through flags.
    pub fn from_env(
        model: impl Into<String>,
        retry: RetryPolicy,
        max_inflight: usize,
    ) -> Result<Self, GatewayError> {
        let base = std::env::var(API_BASE_ENV)
            .map_err(|_| GatewayError::Config(format!("{API_BASE_ENV} is not set")))?;
        let api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        let transport = ReqwestTransport::new(Duration::from_secs(120))?;
        Ok(HttpBackend::new(Box::new(transport), &base, api_key, model, retry, max_inflight))
    }

    fn request_body(&self, transcript: &ChatTranscript) -> String {
        let messages: Vec<serde_json::Value> = transcript
            .turns()
            .iter()
            .map(|m| json!({"role": m.role.as_str(), "content": m.text}))
            .collect();
        let params = transcript.params();
        json!({
            "model": self.model,
            "messages": messages,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        })
        .to_string()
    }

    fn parse_reply(body: &str) -> Result<String, GatewayError> {
        let parsed: CompletionResponse = serde_json::from_str(body)
            .map_err(|e| GatewayError::MalformedResponse(e.to_string()))?;
        let content = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| {
                GatewayError::MalformedResponse("response has no choices[0].message.content".into())
            })?;
        if content.is_empty() {
            return Err(GatewayError::EmptyReply);
        }
        Ok(content)
    }
}

impl ChatBackend for HttpBackend {
    fn id(&self) -> &str {
        &self.model
    }

    fn complete(&self, transcript: &ChatTranscript) -> Result<String, GatewayError> {
        if !transcript.awaits_reply() {
            return Err(GatewayError::InvalidTranscript(
                "transcript must end on a user turn to be completed".into(),
            ));
        }
        let body = self.request_body(transcript);
        let _permit = self.inflight.acquire();
        let attempts = self.retry.attempts();
        let mut last_failure: Option<GatewayError> = None;
        for attempt in 1..=attempts {
            if attempt > 1 {
                std::thread::sleep(self.retry.delay_before_retry(attempt - 2));
            }
            match self.transport.post_json(&self.completions_url, self.api_key.as_deref(), &body)
            {
                Ok((status, text)) if (200..300).contains(&status) => {
                    return Self::parse_reply(&text);
                }
                Ok((status, text)) => {
                    let failure = GatewayError::Http {
                        status,
                        attempts: attempt,
                        message: snippet(&text),
                    };
                    if !is_retryable_status(status) {
                        return Err(failure);
                    }
                    last_failure = Some(failure);
                }
                Err(message) => {
                    last_failure =
                        Some(GatewayError::Transport { attempts: attempt, message });
                }
            }
        }
        Err(last_failure.expect("at least one attempt was made"))
    }
}

/// First line of an error body, truncated, for error messages.
fn snippet(text: &str) -> String {
    let line = text.lines().next().unwrap_or("");
    let mut out: String = line.chars().take(200).collect();
    if out.len() < line.len() {
        out.push('…');
    }
    out
}
