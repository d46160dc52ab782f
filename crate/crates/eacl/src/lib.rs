//! Harvests the entity-aligned cross-lingual corpus: for each English
//! entity, follow Wikipedia's interlanguage links to its titles in other
//! languages, take the first sentence of each linked page's summary, and
//! keep the (title, first sentence) pair only when the title actually
//! occurs in that sentence.
//!
//! All HTTP goes through a [`WikiClient`] that enforces a request-rate
//! ceiling, retries rate-limit and server errors with backoff, and keeps a
//! timestamped request log. Transports are swappable: live HTTPS,
//! recording, or replay from a fixture directory — the same
//! digest-per-file scheme the chat gateway uses, keyed here by URL.

pub mod api;
pub mod client;
pub mod error;
pub mod fixture;
pub mod harvest;
pub mod sentence;
pub mod transport;
pub mod urls;

pub use api::{fetch_langlinks, fetch_summary};
pub use client::{RequestLogEntry, WikiClient, DEFAULT_REQUESTS_PER_SECOND};
pub use error::EaclError;
pub use fixture::{wiki_digest, WikiFixtureRecord, WikiFixtureStore};
pub use harvest::{build_corpus, HarvestOutcome, HarvestState};
pub use sentence::first_sentence;
pub use transport::{HttpWikiTransport, RecordingWikiTransport, ReplayWikiTransport, WikiTransport};
pub use urls::{langlinks_url, summary_url};

/// Environment variable naming the User-Agent sent to Wikipedia.
pub const USER_AGENT_ENV: &str = "EAT_WIKI_UA";
