use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use eat_core::lang::LanguageCode;
use eat_core::normalize::NormalizationPolicy;
use eat_core::sharegpt::EaclPair;
use serde::{Deserialize, Serialize};

use crate::api::{fetch_langlinks, fetch_summary};
use crate::client::WikiClient;
use crate::error::EaclError;
use crate::sentence::first_sentence;

/// Durable progress of a harvest. Persisted after every entity, so an
/// interrupted run resumes where it stopped and never emits a pair twice.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HarvestState {
    /// Entities whose pairs are already in `pairs`.
    pub processed: BTreeSet<String>,
    /// The corpus so far, per target language.
    pub pairs: BTreeMap<LanguageCode, Vec<EaclPair>>,
    /// Entities whose last attempt failed; retried on the next pass or
    /// the next run.
    pub pending_retries: BTreeSet<String>,
}

impl HarvestState {
    /// Loads the state file, or starts fresh when it does not exist.
    pub fn load(path: &Path) -> Result<Self, EaclError> {
        let bytes = match fs::read(path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Ok(HarvestState::default())
            }
            Err(e) => {
                return Err(EaclError::State {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            }
        };
        serde_json::from_slice(&bytes).map_err(|e| EaclError::State {
            path: path.display().to_string(),
            message: format!("not valid JSON: {e}"),
        })
    }

    /// Writes the state atomically (temp file + rename).
    pub fn save(&self, path: &Path) -> Result<(), EaclError> {
        let state_err = |message: String| EaclError::State {
            path: path.display().to_string(),
            message,
        };
        let mut json = serde_json::to_string_pretty(self).map_err(|e| state_err(e.to_string()))?;
        json.push('\n');
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, json).map_err(|e| state_err(e.to_string()))?;
        fs::rename(&tmp, path).map_err(|e| state_err(e.to_string()))?;
        Ok(())
    }

    /// Pairs harvested so far, per language.
    pub fn pair_counts(&self) -> BTreeMap<LanguageCode, usize> {
        self.pairs.iter().map(|(lang, pairs)| (*lang, pairs.len())).collect()
    }
}

/// Result of a harvest run: the final state (which contains the corpus)
/// and the entities that still failed after the retry pass.
#[derive(Debug)]
pub struct HarvestOutcome {
    pub state: HarvestState,
    pub failed: Vec<String>,
}

/// Pairs of one entity across the requested languages, in request order.
fn harvest_entity(
    client: &WikiClient,
    entity: &str,
    languages: &[LanguageCode],
    policy: &NormalizationPolicy,
) -> Result<Vec<EaclPair>, EaclError> {
    let links = fetch_langlinks(client, entity)?;
    let mut pairs = Vec::new();
    for lang in languages {
        let Some(title) = links.get(lang) else { continue };
        let summary = fetch_summary(client, *lang, title)?;
        let sentence = first_sentence(&summary, *lang);
        // The pair stores only the first sentence, so the presence filter
        // applies to exactly that text.
        if !sentence.is_empty() && policy.contains(sentence, title) {
            pairs.push(EaclPair {
                english_entity: entity.to_string(),
                title: title.clone(),
                first_sentence: sentence.to_string(),
                language: *lang,
            });
        }
    }
    Ok(pairs)
}

/// Harvests `entities` across `languages`, persisting state to
/// `state_path` after every entity.
///
/// Entities already marked processed in the state are skipped without any
/// API traffic, so resuming an interrupted run completes the remainder
/// and nothing else. Per-entity failures are contained: the entity lands
/// in `pending_retries`, one retry pass runs at the end, and whatever
/// still fails is reported in the outcome while the run completes with
/// partial results.
pub fn build_corpus(
    client: &WikiClient,
    entities: &[String],
    languages: &[LanguageCode],
    state_path: &Path,
) -> Result<HarvestOutcome, EaclError> {
    let policy = NormalizationPolicy::default();
    let mut state = HarvestState::load(state_path)?;

    // First pass: everything not yet processed, keeping caller order,
    // then any leftovers a previous run could not finish.
    let mut worklist: Vec<String> = Vec::new();
    for entity in entities {
        if !state.processed.contains(entity) && !worklist.contains(entity) {
            worklist.push(entity.clone());
        }
    }
    for entity in &state.pending_retries.clone() {
        if !state.processed.contains(entity) && !worklist.contains(entity) {
            worklist.push(entity.clone());
        }
    }

    let mut retry_queue = Vec::new();
    for entity in &worklist {
        match harvest_entity(client, entity, languages, &policy) {
            Ok(pairs) => record_success(&mut state, entity, pairs, state_path)?,
            Err(_) => {
                state.pending_retries.insert(entity.clone());
                state.save(state_path)?;
                retry_queue.push(entity.clone());
            }
        }
    }

    // One retry pass over this run's failures.
    let mut failed = Vec::new();
    for entity in &retry_queue {
        match harvest_entity(client, entity, languages, &policy) {
            Ok(pairs) => record_success(&mut state, entity, pairs, state_path)?,
            Err(_) => failed.push(entity.clone()),
        }
    }

    Ok(HarvestOutcome { state, failed })
}

fn record_success(
    state: &mut HarvestState,
    entity: &str,
    pairs: Vec<EaclPair>,
    state_path: &Path,
) -> Result<(), EaclError> {
    for pair in pairs {
        state.pairs.entry(pair.language).or_default().push(pair);
    }
    state.processed.insert(entity.to_string());
    state.pending_retries.remove(entity);
    state.save(state_path)
}
