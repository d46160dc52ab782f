use std::path::Path;
use std::sync::Arc;

use eat_core::tag::{EntityTag, TagSet};
use eat_gateway::{ChatBackend, ChatTranscript, RequestParams};

use crate::error::PipelineError;

/// Default instruction prefix for the English NER step.
pub const DEFAULT_EXTRACTOR_PREFIX: &str = "Label the named entities in the sentence. Reply with entries of the form TAG: surface, separated by semicolons. Reply none if there are no entities.";

/// The three-part input every extraction engine receives: an instruction
/// prefix, the allowed tag inventory, and the English sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractorInput {
    pub prefix: String,
    pub tags: TagSet,
    pub sentence: String,
}

impl ExtractorInput {
    /// The input rendered as one prompt text:
    /// prefix, then `TAGS:` line, then `SENTENCE:` line.
    pub fn to_prompt_text(&self) -> String {
        format!("{}\nTAGS: {}\nSENTENCE: {}", self.prefix, self.tags.joined(), self.sentence)
    }
}

/// Assembles an extractor input, rejecting unusable parts up front.
pub fn build_input(
    sentence: &str,
    tags: &TagSet,
    prefix: &str,
) -> Result<ExtractorInput, PipelineError> {
    if tags.is_empty() {
        return Err(PipelineError::EmptyTagSet);
    }
    if sentence.trim().is_empty() {
        return Err(PipelineError::EmptySentence);
    }
    Ok(ExtractorInput {
        prefix: prefix.to_string(),
        tags: tags.clone(),
        sentence: sentence.to_string(),
    })
}

/// One entity named by the extractor: an English surface plus its category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedEntity {
    pub surface: String,
    pub tag: EntityTag,
}

/// A parsed extractor answer, with the raw text kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionAnswer {
    pub raw: String,
    pub entities: Vec<ExtractedEntity>,
    /// Fragments that could not be used: unknown tags, empty surfaces, or
    /// text without a `TAG: surface` shape.
    pub skipped: usize,
}

/// A text-to-text English NER engine. Implementations only generate the
/// answer text; parsing is shared.
pub trait ExtractionEngine: Send + Sync {
    /// Identifier recorded in run manifests.
    fn id(&self) -> String;

    fn generate(&self, input: &ExtractorInput) -> Result<String, PipelineError>;
}

/// Runs an engine and parses its answer.
///
/// A `none`/empty answer means "no entities". An answer whose fragments
/// *all* fail to parse is an error carrying the raw text; partial garbage
/// is tolerated (good fragments are kept, the rest counted in `skipped`).
pub fn extract(
    input: &ExtractorInput,
    engine: &dyn ExtractionEngine,
) -> Result<ExtractionAnswer, PipelineError> {
    let raw = engine.generate(input)?;
    let answer = parse_answer(&raw, &input.tags);
    if answer.entities.is_empty() && answer.skipped > 0 {
        return Err(PipelineError::UnparseableAnswer { raw });
    }
    Ok(answer)
}

/// Lenient parser for `TAG: surface` lists separated by `;` or newlines.
///
/// `none` (any case) or a blank answer yields no entities. Fragments with
/// an unknown tag, an empty surface, or no colon are counted as skipped,
/// never fatal. Surfaces keep their internal spacing but are trimmed.
pub fn parse_answer(raw: &str, tags: &TagSet) -> ExtractionAnswer {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
        return ExtractionAnswer { raw: raw.to_string(), entities: Vec::new(), skipped: 0 };
    }
    let mut entities = Vec::new();
    let mut skipped = 0;
    for fragment in trimmed.split([';', '\n']) {
        let fragment = fragment.trim();
        if fragment.is_empty() {
            continue;
        }
        let Some((tag_text, surface)) = fragment.split_once(':') else {
            skipped += 1;
            continue;
        };
        let surface = surface.trim();
        let tag = tags.get(tag_text.trim());
        match (tag, surface.is_empty()) {
            (Some(tag), false) => {
                entities.push(ExtractedEntity { surface: surface.to_string(), tag: tag.clone() })
            }
            _ => skipped += 1,
        }
    }
    ExtractionAnswer { raw: raw.to_string(), entities, skipped }
}

/// NER engine backed by a chat model: sends the rendered input as a single
/// user turn and returns the raw reply.
pub struct ChatEngine {
    backend: Arc<dyn ChatBackend>,
    params: RequestParams,
}

impl ChatEngine {
    pub fn new(backend: Arc<dyn ChatBackend>, params: RequestParams) -> Self {
        ChatEngine { backend, params }
    }
}

impl ExtractionEngine for ChatEngine {
    fn id(&self) -> String {
        format!("chat:{}", self.backend.id())
    }

    fn generate(&self, input: &ExtractorInput) -> Result<String, PipelineError> {
        let mut transcript = ChatTranscript::new(self.backend.id(), self.params);
        transcript.push_user(input.to_prompt_text())?;
        Ok(self.backend.complete(&transcript)?)
    }
}

/// Deterministic offline engine: a fixed surface → tag dictionary. Scans
/// the sentence for each entry (longest surfaces first, first occurrence
/// order in the answer) and emits the same `TAG: surface` grammar a chat
/// engine would.
pub struct DictionaryEngine {
    entries: Vec<(String, EntityTag)>,
}

impl DictionaryEngine {
    pub fn from_entries(entries: Vec<(String, EntityTag)>) -> Self {
        DictionaryEngine { entries }
    }

    /// Loads `surface<TAB>TAG` lines; `#` starts a comment line.
    pub fn from_file(path: &Path, tags: &TagSet) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Dictionary {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((surface, tag_name)) = line.rsplit_once('\t') else {
                return Err(PipelineError::Dictionary {
                    path: path.display().to_string(),
                    message: format!("line {}: expected `surface<TAB>TAG`", idx + 1),
                });
            };
            let tag = tags.get(tag_name.trim()).cloned().ok_or_else(|| {
                PipelineError::Dictionary {
                    path: path.display().to_string(),
                    message: format!("line {}: unknown tag {tag_name:?}", idx + 1),
                }
            })?;
            entries.push((surface.trim().to_string(), tag));
        }
        Ok(DictionaryEngine { entries })
    }
}

impl ExtractionEngine for DictionaryEngine {
    fn id(&self) -> String {
        "dictionary".to_string()
    }

    fn generate(&self, input: &ExtractorInput) -> Result<String, PipelineError> {
        // Match longest surfaces first so "New York City" wins over "New
        // York", then order by position in the sentence.
        let mut by_length: Vec<&(String, EntityTag)> = self.entries.iter().collect();
        by_length.sort_by_key(|(surface, _)| std::cmp::Reverse(surface.len()));
        let mut found: Vec<(usize, &str, &EntityTag)> = Vec::new();
        let mut claimed: Vec<(usize, usize)> = Vec::new();
        for (surface, tag) in by_length {
            if let Some(at) = input.sentence.find(surface.as_str()) {
                let range = (at, at + surface.len());
                let overlaps =
                    claimed.iter().any(|&(s, e)| range.0 < e && s < range.1);
                if !overlaps {
                    found.push((at, surface, tag));
                    claimed.push(range);
                }
            }
        }
        found.sort_by_key(|&(at, _, _)| at);
        if found.is_empty() {
            return Ok("none".to_string());
        }
        let parts: Vec<String> =
            found.iter().map(|(_, surface, tag)| format!("{tag}: {surface}")).collect();
        Ok(parts.join("; "))
    }
}
