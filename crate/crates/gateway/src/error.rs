use thiserror::Error;

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),
    #[error("no recorded reply for digest {digest}")]
    ReplayMiss { digest: String },
    #[error("backend returned an empty reply")]
    EmptyReply,
    #[error("transport failed after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("server returned status {status} after {attempts} attempt(s): {message}")]
    Http { status: u16, attempts: u32, message: String },
    #[error("malformed completion response: {0}")]
    MalformedResponse(String),
    #[error("fixture store: {0}")]
    Fixture(#[from] crate::fixture::FixtureError),
    #[error("missing configuration: {0}")]
    Config(String),
}

impl GatewayError {
    /// The digest of the unmatched request, when this error is a replay
    /// miss. Lets callers report exactly which fixture is absent.
    pub fn replay_miss_digest(&self) -> Option<&str> {
        match self {
            GatewayError::ReplayMiss { digest } => Some(digest),
            _ => None,
        }
    }
}
