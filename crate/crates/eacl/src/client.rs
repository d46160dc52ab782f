use std::sync::Mutex;
use std::time::{Duration, Instant};

use eat_gateway::retry::is_retryable_status;
use eat_gateway::RetryPolicy;

use crate::error::EaclError;
use crate::transport::WikiTransport;

/// Wikipedia-etiquette default ceiling.
pub const DEFAULT_REQUESTS_PER_SECOND: f64 = 10.0;

/// One attempted request, stamped with its offset from client creation.
/// The log is the audit trail for the rate ceiling: consecutive offsets
/// can never be closer than the configured minimum interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestLogEntry {
    pub url: String,
    pub offset: Duration,
    /// 1 for the first try of a request, 2 for its first retry, and so on.
    pub attempt: u32,
}

/// Token bucket with capacity one: each acquisition is spaced at least
/// `min_interval` after the previous one, so the request rate can never
/// exceed the ceiling even in a burst.
struct RateLimiter {
    min_interval: Duration,
    last: Mutex<Option<Instant>>,
}

impl RateLimiter {
    fn new(min_interval: Duration) -> Self {
        RateLimiter { min_interval, last: Mutex::new(None) }
    }

    /// Blocks until a request may be sent; returns the release instant.
    /// The lock is held through the sleep on purpose — concurrent callers
    /// must queue, one interval apart.
    fn acquire(&self) -> Instant {
        let mut last = self.last.lock().unwrap();
        let now = Instant::now();
        let released = match *last {
            Some(prev) => {
                let ready = prev + self.min_interval;
                if ready > now {
                    std::thread::sleep(ready - now);
                    // Sleep can overshoot; base the next interval on the
                    // real time so logged gaps never understate the rate.
                    Instant::now()
                } else {
                    now
                }
            }
            None => now,
        };
        *last = Some(released);
        released
    }
}

/// Rate-limited, retrying HTTP front door for the harvester. Every
/// attempt passes through the limiter and lands in the request log.
pub struct WikiClient {
    transport: Box<dyn WikiTransport>,
    limiter: RateLimiter,
    retry: RetryPolicy,
    created: Instant,
    log: Mutex<Vec<RequestLogEntry>>,
}

impl WikiClient {
    pub fn new(
        transport: Box<dyn WikiTransport>,
        requests_per_second: f64,
        retry: RetryPolicy,
    ) -> Result<Self, EaclError> {
        if !(requests_per_second.is_finite() && requests_per_second > 0.0) {
            return Err(EaclError::Config(format!(
                "requests_per_second must be a positive number, got {requests_per_second}"
            )));
        }
        Ok(WikiClient {
            transport,
            limiter: RateLimiter::new(Duration::from_secs_f64(1.0 / requests_per_second)),
            retry,
            created: Instant::now(),
            log: Mutex::new(Vec::new()),
        })
    }

    /// Fetches a URL. Rate-limit (429) and server (5xx) responses are
    /// retried with exponential backoff up to the retry budget, as are
    /// transport failures; any other status is returned to the caller to
    /// interpret (404 is meaningful for summaries).
    pub fn get(&self, url: &str) -> Result<(u16, String), EaclError> {
        let attempts = self.retry.attempts();
        let mut last_failure: Option<EaclError> = None;
        for attempt in 1..=attempts {
            let released = self.limiter.acquire();
            self.log.lock().unwrap().push(RequestLogEntry {
                url: url.to_string(),
                offset: released.duration_since(self.created),
                attempt,
            });
            match self.transport.get(url) {
                Ok((status, _)) if is_retryable_status(status) => {
                    last_failure = Some(EaclError::Http { url: url.to_string(), status, attempts });
                }
                Ok(response) => return Ok(response),
                Err(message) => {
                    last_failure = Some(EaclError::Transport { attempts, message });
                }
            }
            if attempt < attempts {
                std::thread::sleep(self.retry.delay_before_retry(attempt - 1));
            }
        }
        Err(last_failure.expect("at least one attempt was made"))
    }

    /// Snapshot of every attempt so far, in send order.
    pub fn request_log(&self) -> Vec<RequestLogEntry> {
        self.log.lock().unwrap().clone()
    }

    /// The smallest spacing the limiter allows between two requests.
    pub fn min_interval(&self) -> Duration {
        self.limiter.min_interval
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use std::sync::atomic::{AtomicU32, Ordering};

    /// Replies from a URL → script map; each URL's script is a list of
    /// (status, body) pairs consumed one per attempt, repeating the last.
    struct Scripted {
        replies: HashMap<String, Vec<(u16, String)>>,
        served: AtomicU32,
    }

    impl Scripted {
        fn new(entries: &[(&str, &[(u16, &str)])]) -> Self {
            let replies = entries
                .iter()
                .map(|(url, script)| {
                    let script =
                        script.iter().map(|(s, b)| (*s, b.to_string())).collect::<Vec<_>>();
                    (url.to_string(), script)
                })
                .collect();
            Scripted { replies, served: AtomicU32::new(0) }
        }
    }

    impl WikiTransport for Scripted {
        fn get(&self, url: &str) -> Result<(u16, String), String> {
            let script = self.replies.get(url).ok_or_else(|| format!("unknown url {url}"))?;
            let n = self.served.fetch_add(1, Ordering::SeqCst) as usize;
            let (status, body) = script.get(n.min(script.len() - 1)).unwrap().clone();
            Ok((status, body))
        }
    }

    fn fast_retry() -> RetryPolicy {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(1),
            max_delay: Duration::from_millis(4),
        }
    }

    #[test]
    fn retries_429_then_succeeds_and_logs_both_attempts() {
        let transport = Scripted::new(&[("https://w/a", &[(429, "slow down"), (200, "fine")])]);
        let client = WikiClient::new(Box::new(transport), 1000.0, fast_retry()).unwrap();
        let (status, body) = client.get("https://w/a").unwrap();
        assert_eq!((status, body.as_str()), (200, "fine"));

        let log = client.request_log();
        assert_eq!(log.len(), 2);
        assert_eq!((log[0].attempt, log[1].attempt), (1, 2));
        assert!(log.iter().all(|e| e.url == "https://w/a"));
    }

    #[test]
    fn exhausted_retries_surface_the_status() {
        let transport = Scripted::new(&[("https://w/b", &[(503, "down")])]);
        let client = WikiClient::new(Box::new(transport), 1000.0, fast_retry()).unwrap();
        let err = client.get("https://w/b").unwrap_err();
        match err {
            EaclError::Http { status, attempts, .. } => {
                assert_eq!(status, 503);
                assert_eq!(attempts, 3);
            }
            other => panic!("expected Http error, got {other}"),
        }
        assert_eq!(client.request_log().len(), 3);
    }

    #[test]
    fn non_retryable_statuses_come_back_without_retries() {
        let transport = Scripted::new(&[("https://w/c", &[(404, "not here")])]);
        let client = WikiClient::new(Box::new(transport), 1000.0, fast_retry()).unwrap();
        assert_eq!(client.get("https://w/c").unwrap().0, 404);
        assert_eq!(client.request_log().len(), 1);
    }

    #[test]
    fn request_spacing_respects_the_ceiling() {
        let transport = Scripted::new(&[("https://w/d", &[(200, "ok")])]);
        // 100 requests/second → at least 10ms between attempts.
        let client = WikiClient::new(Box::new(transport), 100.0, RetryPolicy::once()).unwrap();
        for _ in 0..5 {
            client.get("https://w/d").unwrap();
        }
        let log = client.request_log();
        assert_eq!(log.len(), 5);
        for pair in log.windows(2) {
            let gap = pair[1].offset - pair[0].offset;
            assert!(gap >= client.min_interval(), "gap {gap:?} under the 10ms floor");
        }
    }

    #[test]
    fn rejects_nonsense_rates() {
        for bad in [0.0, -3.0, f64::NAN, f64::INFINITY] {
            let transport = Scripted::new(&[]);
            assert!(matches!(
                WikiClient::new(Box::new(transport), bad, RetryPolicy::once()),
                Err(EaclError::Config(_))
            ));
        }
    }
}
