use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sentence::{first_dangling_inside, LabeledSentence};
use crate::tag::{BioTag, EntityTag};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("span {start}..{end} is empty or reversed")]
    EmptyRange { start: usize, end: usize },
    #[error("span {start}..{end} does not fit a sentence of {len} tokens")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("spans {first_start}..{first_end} and {second_start}..{second_end} overlap")]
    Overlap {
        first_start: usize,
        first_end: usize,
        second_start: usize,
        second_end: usize,
    },
    #[error("tag sequence is not BIO2 at token {index}")]
    NotBio2 { index: usize },
}

/// A labeled token range `start..end` (half-open) within one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub tag: EntityTag,
    /// The mention text this span was built from (joining convention is
    /// the producer's; see `spans_from_bio` and the grounding module).
    pub surface: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, tag: EntityTag, surface: String) -> Result<Self, SpanError> {
        if start >= end {
            return Err(SpanError::EmptyRange { start, end });
        }
        Ok(EntitySpan { start, end, tag, surface })
    }

    pub fn token_count(&self) -> usize {
        self.end - self.start
    }

    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Extracts entity spans from a sentence's BIO2 tags, in order of
/// appearance. Surfaces are the covered tokens joined with single spaces.
pub fn spans_from_bio(sentence: &LabeledSentence) -> Result<Vec<EntitySpan>, SpanError> {
    spans_from_tags(&sentence.tokens, &sentence.tags)
}

/// Tag-sequence form of [`spans_from_bio`], for callers that do not have a
/// full sentence (e.g. evaluation over prediction files).
pub fn spans_from_tags(tokens: &[String], tags: &[BioTag]) -> Result<Vec<EntitySpan>, SpanError> {
    if let Some(index) = first_dangling_inside(tags) {
        return Err(SpanError::NotBio2 { index });
    }
    let mut spans = Vec::new();
    let mut open: Option<(usize, EntityTag)> = None;
    for (i, tag) in tags.iter().enumerate() {
        match tag {
            BioTag::Begin(cat) => {
                if let Some((start, t)) = open.take() {
                    spans.push(make_span(tokens, start, i, t));
                }
                open = Some((i, cat.clone()));
            }
            BioTag::Inside(_) => {
                // Continuation of the open span; validated above.
            }
            BioTag::Outside => {
                if let Some((start, t)) = open.take() {
                    spans.push(make_span(tokens, start, i, t));
                }
            }
        }
    }
    if let Some((start, t)) = open {
        spans.push(make_span(tokens, start, tags.len(), t));
    }
    Ok(spans)
}

fn make_span(tokens: &[String], start: usize, end: usize, tag: EntityTag) -> EntitySpan {
    let surface = tokens[start..end].join(" ");
    EntitySpan { start, end, tag, surface }
}

/// Renders non-overlapping spans back into a BIO2 tag sequence of length
/// `len`. Spans may arrive in any order; overlap or out-of-bounds input is
/// an error.
pub fn bio_from_spans(len: usize, spans: &[EntitySpan]) -> Result<Vec<BioTag>, SpanError> {
    let mut sorted: Vec<&EntitySpan> = spans.iter().collect();
    sorted.sort_by_key(|s| (s.start, s.end));
    for pair in sorted.windows(2) {
        if pair[0].overlaps(pair[1]) {
            return Err(SpanError::Overlap {
                first_start: pair[0].start,
                first_end: pair[0].end,
                second_start: pair[1].start,
                second_end: pair[1].end,
            });
        }
    }
    let mut tags = vec![BioTag::Outside; len];
    for span in sorted {
        if span.start >= span.end {
            return Err(SpanError::EmptyRange { start: span.start, end: span.end });
        }
        if span.end > len {
            return Err(SpanError::OutOfBounds { start: span.start, end: span.end, len });
        }
        tags[span.start] = BioTag::Begin(span.tag.clone());
        for slot in tags.iter_mut().take(span.end).skip(span.start + 1) {
            *slot = BioTag::Inside(span.tag.clone());
        }
    }
    Ok(tags)
}
