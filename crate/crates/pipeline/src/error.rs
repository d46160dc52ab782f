use eat_core::span::SpanError;
use eat_core::text::TemplateError;
use eat_gateway::GatewayError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("translation round {round} failed: {source}")]
    Round {
        round: u32,
        #[source]
        source: GatewayError,
    },
    #[error("the filter round returned only whitespace or quotes")]
    EmptyFilterOutput,
    #[error("rounds must be between 1 and 5, got {0}")]
    InvalidRounds(u32),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error("extractor input needs a non-empty tag set")]
    EmptyTagSet,
    #[error("extractor input needs a non-empty sentence")]
    EmptySentence,
    #[error("could not parse any entity from extractor answer {raw:?}")]
    UnparseableAnswer { raw: String },
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error("dictionary file {path}: {message}")]
    Dictionary { path: String, message: String },
}

impl PipelineError {
    /// The missing fixture digest, when the underlying failure is a replay
    /// miss. Used by strict replay mode to abort and name the fixture.
    pub fn replay_miss_digest(&self) -> Option<&str> {
        match self {
            PipelineError::Round { source, .. } => source.replay_miss_digest(),
            PipelineError::Gateway(source) => source.replay_miss_digest(),
            _ => None,
        }
    }
}
