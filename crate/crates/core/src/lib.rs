//! Core domain model for entity-aligned translation of NER corpora.
//!
//! This crate holds everything that is pure data and pure computation:
//! language codes, entity tag sets, BIO-tagged sentences, the span/tag
//! algebra, text normalization and span grounding, corpus file I/O,
//! instruction-corpus export, translation-quality metrics, and the
//! block-wise quantizer used for memory-efficient fine-tuning.

pub mod corpus;
pub mod ground;
pub mod lang;
pub mod metrics;
pub mod normalize;
pub mod quant;
pub mod sentence;
pub mod sharegpt;
pub mod span;
pub mod tag;
pub mod text;

pub use lang::LanguageCode;
pub use normalize::{NormalizationPolicy, UnicodeForm};
pub use sentence::LabeledSentence;
pub use span::EntitySpan;
pub use tag::{BioTag, EntityTag, TagSet};
