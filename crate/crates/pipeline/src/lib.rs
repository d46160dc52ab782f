//! The sentence-level pipeline: translate a target-language sentence into
//! English over several reasoning rounds, extract English entities, translate
//! each entity back, ground it as a token span, and emit BIO predictions.

pub mod error;
pub mod extract;
pub mod run;
pub mod translate;

pub use error::PipelineError;
pub use extract::DEFAULT_EXTRACTOR_PREFIX;
pub use extract::{
    build_input, extract, parse_answer, ChatEngine, DictionaryEngine, ExtractedEntity,
    ExtractionAnswer, ExtractionEngine, ExtractorInput,
};
pub use run::{
    process_sentence, resolve_overlaps, run, DropReason, DroppedEntity, PipelineConfig,
    RunManifest, RunOutput, SentenceFailure, SentenceOutcome, SentenceResult,
};
pub use translate::{backward_translate, forward_translate, BackwardResult, ForwardResult};
