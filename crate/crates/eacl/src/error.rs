use thiserror::Error;

#[derive(Debug, Error)]
pub enum EaclError {
    #[error("transport failed after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("{url} kept returning status {status} ({attempts} attempt(s))")]
    Http { url: String, status: u16, attempts: u32 },
    #[error("unexpected response from {url}: {message}")]
    Malformed { url: String, message: String },
    #[error("state file {path}: {message}")]
    State { path: String, message: String },
    #[error("fixture {path}: {message}")]
    Fixture { path: String, message: String },
    #[error("missing configuration: {0}")]
    Config(String),
}
