use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::LanguageCode;
use crate::tag::BioTag;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SentenceError {
    #[error("sentence {id}: {tokens} tokens but {tags} tags")]
    LengthMismatch { id: usize, tokens: usize, tags: usize },
    #[error("sentence {id}: token {index} has an I- tag that does not continue a same-category B- or I- tag")]
    DanglingInside { id: usize, index: usize },
    #[error("sentence {id}: token {index} is empty")]
    EmptyToken { id: usize, index: usize },
}

/// A tokenized sentence with one BIO2 tag per token.
///
/// Construction validates the BIO2 discipline: every `I-X` must directly
/// follow a `B-X` or `I-X` of the same category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub id: usize,
    pub tokens: Vec<String>,
    pub tags: Vec<BioTag>,
    pub language: LanguageCode,
}

impl LabeledSentence {
    pub fn new(
        id: usize,
        tokens: Vec<String>,
        tags: Vec<BioTag>,
        language: LanguageCode,
    ) -> Result<Self, SentenceError> {
        if tokens.len() != tags.len() {
            return Err(SentenceError::LengthMismatch {
                id,
                tokens: tokens.len(),
                tags: tags.len(),
            });
        }
        if let Some(index) = tokens.iter().position(String::is_empty) {
            return Err(SentenceError::EmptyToken { id, index });
        }
        if let Some(index) = first_dangling_inside(&tags) {
            return Err(SentenceError::DanglingInside { id, index });
        }
        Ok(LabeledSentence { id, tokens, tags, language })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The sentence as prompt text: tokens joined with single spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Index of the first `I-X` tag that does not continue a same-category
/// entity, or `None` when the sequence is well-formed BIO2.
pub fn first_dangling_inside(tags: &[BioTag]) -> Option<usize> {
    for (i, tag) in tags.iter().enumerate() {
        if let BioTag::Inside(cat) = tag {
            let ok = i > 0
                && match &tags[i - 1] {
                    BioTag::Begin(prev) | BioTag::Inside(prev) => prev == cat,
                    BioTag::Outside => false,
                };
            if !ok {
                return Some(i);
            }
        }
    }
    None
}
