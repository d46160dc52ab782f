//! Everything between the pipeline and a chat model: the message/transcript
//! contract, prompt templates, request digests, and three interchangeable
//! backends — live HTTP (OpenAI-compatible), recording, and replay.
//!
//! Replayed runs are bit-deterministic: a request is keyed by a digest of
//! the backend id, every turn text, and the decoding parameters, and the
//! fixture store maps that digest to the recorded reply.

pub mod backend;
pub mod digest;
pub mod error;
pub mod fixture;
pub mod http;
pub mod message;
pub mod retry;
pub mod template;

pub use backend::{ChatBackend, RecordingBackend, ReplayBackend};
pub use error::GatewayError;
pub use fixture::FixtureStore;
pub use http::{HttpBackend, HttpTransport, ReqwestTransport};
pub use message::{ChatMessage, ChatTranscript, RequestParams, Role};
pub use retry::RetryPolicy;
pub use template::{PromptTemplate, TemplateId, TemplateSet};
