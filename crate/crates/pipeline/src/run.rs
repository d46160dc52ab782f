use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use chrono::{DateTime, SecondsFormat, Utc};
use eat_core::corpus::DatasetSplit;
use eat_core::ground::ground_span;
use eat_core::normalize::NormalizationPolicy;
use eat_core::sentence::LabeledSentence;
use eat_core::span::{bio_from_spans, EntitySpan};
use eat_core::tag::{BioTag, TagSet};
use eat_gateway::{ChatBackend, RequestParams, TemplateSet};
use serde::Serialize;

use crate::error::PipelineError;
use crate::extract::{build_input, extract, ExtractionEngine};
use crate::translate::{backward_translate, forward_translate, BackwardResult, ForwardResult};

/// Everything a run needs besides the dataset itself.
pub struct PipelineConfig {
    pub backend: Arc<dyn ChatBackend>,
    pub engine: Arc<dyn ExtractionEngine>,
    pub templates: TemplateSet,
    pub params: RequestParams,
    /// Reasoning rounds before the filter call (1..=5).
    pub rounds: u32,
    pub policy: NormalizationPolicy,
    pub max_span_tokens: usize,
    pub extractor_prefix: String,
    pub tags: TagSet,
    /// Worker threads; sentence order of the output never depends on it.
    pub parallelism: usize,
    /// Abort the whole run on the first replay miss instead of recording a
    /// per-sentence failure. The error names the missing digest.
    pub strict_replay: bool,
    /// Dataset label recorded in the manifest (usually the input path).
    pub dataset_label: String,
}

/// Why a backward-translated entity did not make it into the predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    /// The candidate text occurs nowhere in the sentence.
    NoSpanMatch,
    /// The candidate grounded onto tokens already claimed by an earlier
    /// entity.
    Overlap,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DropReason::NoSpanMatch => "no span match",
            DropReason::Overlap => "overlap",
        })
    }
}

/// An entity that was extracted and back-translated but not grounded.
#[derive(Debug, Clone)]
pub struct DroppedEntity {
    /// The candidate in the sentence's language (for `NoSpanMatch`) or the
    /// grounded surface (for `Overlap`).
    pub surface: String,
    pub english_surface: String,
    pub tag: eat_core::tag::EntityTag,
    pub reason: DropReason,
}

/// A fully processed sentence.
#[derive(Debug, Clone)]
pub struct SentenceOutcome {
    pub sentence_id: usize,
    pub predicted_tags: Vec<BioTag>,
    /// Grounded spans, sorted by start, non-overlapping.
    pub grounded: Vec<EntitySpan>,
    pub dropped: Vec<DroppedEntity>,
    pub forward: ForwardResult,
    pub backward: Vec<BackwardResult>,
}

/// A sentence the pipeline could not process; the rest of the run is
/// unaffected.
#[derive(Debug, Clone)]
pub struct SentenceFailure {
    pub sentence_id: usize,
    pub token_count: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub enum SentenceResult {
    Completed(Box<SentenceOutcome>),
    Failed(SentenceFailure),
}

impl SentenceResult {
    pub fn sentence_id(&self) -> usize {
        match self {
            SentenceResult::Completed(o) => o.sentence_id,
            SentenceResult::Failed(f) => f.sentence_id,
        }
    }

    /// Predicted tags; a failed sentence predicts all-outside so
    /// evaluation shapes still line up.
    pub fn predicted_tags(&self) -> Vec<BioTag> {
        match self {
            SentenceResult::Completed(o) => o.predicted_tags.clone(),
            SentenceResult::Failed(f) => vec![BioTag::Outside; f.token_count],
        }
    }
}

/// Keeps a maximal prefix-greedy subset of non-overlapping spans.
///
/// Spans are ranked by start position, then longer first, then input
/// order; each span is kept iff it does not overlap an already-kept one.
/// Returns `(kept, rejected)`, both preserving the ranking order.
pub fn resolve_overlaps(spans: Vec<EntitySpan>) -> (Vec<EntitySpan>, Vec<EntitySpan>) {
    let mut ranked: Vec<(usize, EntitySpan)> = spans.into_iter().enumerate().collect();
    ranked.sort_by_key(|(order, span)| (span.start, std::cmp::Reverse(span.end), *order));
    let mut kept: Vec<EntitySpan> = Vec::new();
    let mut rejected: Vec<EntitySpan> = Vec::new();
    for (_, span) in ranked {
        if kept.iter().any(|k| k.overlaps(&span)) {
            rejected.push(span);
        } else {
            kept.push(span);
        }
    }
    (kept, rejected)
}

/// Runs the full chain on one sentence: forward translation, extraction,
/// per-entity backward translation, grounding, overlap resolution, and
/// BIO rendering.
///
/// Entities that fail to ground (or lose overlap resolution) land in
/// `dropped`, not in errors; backend and parsing failures abort the
/// sentence.
pub fn process_sentence(
    sentence: &LabeledSentence,
    config: &PipelineConfig,
) -> Result<SentenceOutcome, PipelineError> {
    let text = sentence.text();
    let forward = forward_translate(
        &text,
        sentence.id,
        sentence.language,
        config.backend.as_ref(),
        &config.templates,
        config.params,
        config.rounds,
    )?;

    let input = build_input(&forward.english_text, &config.tags, &config.extractor_prefix)?;
    let answer = extract(&input, config.engine.as_ref())?;

    let mut backward = Vec::with_capacity(answer.entities.len());
    for entity in &answer.entities {
        backward.push(backward_translate(
            entity,
            &text,
            sentence.language,
            config.backend.as_ref(),
            &config.templates,
            config.params,
            config.rounds,
        )?);
    }

    let mut dropped = Vec::new();
    let mut candidates = Vec::new();
    for result in &backward {
        match ground_span(
            &result.candidate_text,
            &sentence.tokens,
            &config.policy,
            config.max_span_tokens,
        ) {
            Some((start, end)) => {
                let surface = config.policy.normalize(&result.candidate_text);
                candidates.push(EntitySpan {
                    start,
                    end,
                    tag: result.source_entity.tag.clone(),
                    surface,
                });
            }
            None => dropped.push(DroppedEntity {
                surface: config.policy.normalize(&result.candidate_text),
                english_surface: result.source_entity.surface.clone(),
                tag: result.source_entity.tag.clone(),
                reason: DropReason::NoSpanMatch,
            }),
        }
    }

    let (kept, rejected) = resolve_overlaps(candidates);
    for span in rejected {
        dropped.push(DroppedEntity {
            surface: span.surface.clone(),
            english_surface: span.surface,
            tag: span.tag,
            reason: DropReason::Overlap,
        });
    }

    let predicted_tags = bio_from_spans(sentence.len(), &kept)?;
    Ok(SentenceOutcome {
        sentence_id: sentence.id,
        predicted_tags,
        grounded: kept,
        dropped,
        forward,
        backward,
    })
}

/// Reproducibility record written next to every run's predictions.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub dataset: String,
    pub language: String,
    pub backend_id: String,
    pub engine_id: String,
    pub template_digests: BTreeMap<String, String>,
    pub rounds: u32,
    pub temperature: f64,
    pub max_tokens: u32,
    pub max_span_tokens: usize,
    pub parallelism: usize,
    pub sentences: usize,
    pub failures: usize,
    pub started_at: String,
    pub finished_at: String,
}

/// A completed run: per-sentence results in dataset order plus the
/// manifest.
#[derive(Debug)]
pub struct RunOutput {
    pub results: Vec<SentenceResult>,
    pub manifest: RunManifest,
}

/// Processes a whole split with a bounded worker pool.
///
/// Results come back in dataset order regardless of `parallelism`. A
/// sentence-level failure is recorded and the run continues; in strict
/// replay mode a replay miss aborts the run instead, and the returned
/// error names the missing digest.
pub fn run(dataset: &DatasetSplit, config: &PipelineConfig) -> Result<RunOutput, PipelineError> {
    let started_at = now_rfc3339();
    let total = dataset.sentences.len();
    let workers = config.parallelism.clamp(1, total.max(1));

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let slots: Mutex<Vec<Option<SentenceResult>>> = Mutex::new((0..total).map(|_| None).collect());
    let fatal: Mutex<Option<PipelineError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if abort.load(Ordering::SeqCst) {
                    break;
                }
                let index = next.fetch_add(1, Ordering::SeqCst);
                if index >= total {
                    break;
                }
                let sentence = &dataset.sentences[index];
                let result = match process_sentence(sentence, config) {
                    Ok(outcome) => SentenceResult::Completed(Box::new(outcome)),
                    Err(error) => {
                        if config.strict_replay && error.replay_miss_digest().is_some() {
                            *fatal.lock().unwrap() = Some(error);
                            abort.store(true, Ordering::SeqCst);
                            break;
                        }
                        SentenceResult::Failed(SentenceFailure {
                            sentence_id: sentence.id,
                            token_count: sentence.len(),
                            message: error.to_string(),
                        })
                    }
                };
                slots.lock().unwrap()[index] = Some(result);
            });
        }
    });

    if let Some(error) = fatal.into_inner().unwrap() {
        return Err(error);
    }

    let results: Vec<SentenceResult> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every index was processed"))
        .collect();
    let failures = results
        .iter()
        .filter(|r| matches!(r, SentenceResult::Failed(_)))
        .count();

    let manifest = RunManifest {
        dataset: config.dataset_label.clone(),
        language: dataset.language.to_string(),
        backend_id: config.backend.id().to_string(),
        engine_id: config.engine.id(),
        template_digests: config.templates.digests(),
        rounds: config.rounds,
        temperature: config.params.temperature,
        max_tokens: config.params.max_tokens,
        max_span_tokens: config.max_span_tokens,
        parallelism: config.parallelism,
        sentences: total,
        failures,
        started_at,
        finished_at: now_rfc3339(),
    };

    Ok(RunOutput { results, manifest })
}

fn now_rfc3339() -> String {
    let now: DateTime<Utc> = Utc::now();
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use eat_core::tag::EntityTag;

    fn span(start: usize, end: usize, tag: &str) -> EntitySpan {
        EntitySpan {
            start,
            end,
            tag: EntityTag::new(tag).unwrap(),
            surface: format!("s{start}e{end}"),
        }
    }

    #[test]
    fn keeps_non_overlapping_spans_sorted() {
        let (kept, rejected) = resolve_overlaps(vec![span(3, 4, "LOC"), span(0, 2, "PER")]);
        assert_eq!(kept.len(), 2);
        assert!(rejected.is_empty());
        assert_eq!(kept[0].start, 0);
        assert_eq!(kept[1].start, 3);
    }

    #[test]
    fn earlier_start_wins_then_longer() {
        // Same start: longer wins.
        let (kept, rejected) = resolve_overlaps(vec![span(0, 1, "PER"), span(0, 3, "LOC")]);
        assert_eq!(kept.len(), 1);
        assert_eq!((kept[0].start, kept[0].end), (0, 3));
        assert_eq!((rejected[0].start, rejected[0].end), (0, 1));

        // Different starts: the leftmost is ranked first and keeps its
        // claim even though a longer span overlaps it.
        let (kept, _) = resolve_overlaps(vec![span(1, 5, "PER"), span(0, 2, "LOC")]);
        assert_eq!((kept[0].start, kept[0].end), (0, 2));
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn input_order_breaks_exact_ties() {
        let first = span(0, 2, "PER");
        let second = span(0, 2, "LOC");
        let (kept, rejected) = resolve_overlaps(vec![first.clone(), second.clone()]);
        assert_eq!(kept, vec![first]);
        assert_eq!(rejected, vec![second]);
    }

    #[test]
    fn chains_of_overlaps_resolve_greedily() {
        // [0,2) kept; [1,4) overlaps kept -> rejected; [3,5) does not
        // overlap [0,2) -> kept.
        let (kept, rejected) =
            resolve_overlaps(vec![span(0, 2, "A"), span(1, 4, "B"), span(3, 5, "C")]);
        let kept_ranges: Vec<(usize, usize)> = kept.iter().map(|s| (s.start, s.end)).collect();
        assert_eq!(kept_ranges, vec![(0, 2), (3, 5)]);
        assert_eq!(rejected.len(), 1);
    }
}
