use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tag::BioTag;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("gold has {gold} sentences but predictions have {predictions}")]
    SentenceCountMismatch { gold: usize, predictions: usize },
    #[error("sentence {index}: gold has {gold} tags but prediction has {predictions}")]
    TagCountMismatch { index: usize, gold: usize, predictions: usize },
}

/// Corpus-style BLEU for a single candidate/reference pair.
///
/// `precisions[i]` is the clipped (i+1)-gram precision. `brevity_penalty`
/// is 1 when the candidate is longer than the reference and
/// `exp(1 - len_ref/len_cand)` otherwise. `bleu` is the penalty times the
/// geometric mean of the precisions — with no smoothing, so any zero
/// precision zeroes the score. Serialized as `{precisions, bp, score}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    pub precisions: Vec<f64>,
    #[serde(rename = "bp")]
    pub brevity_penalty: f64,
    #[serde(rename = "score")]
    pub bleu: f64,
}

/// BLEU with clipped n-gram precisions up to `max_n` (conventionally 4).
///
/// An empty candidate scores 0 with zero precisions and a zero brevity
/// penalty rather than dividing by zero.
pub fn bleu<S: AsRef<str>>(candidate: &[S], reference: &[S], max_n: usize) -> BleuReport {
    assert!(max_n >= 1, "max_n must be at least 1");
    let cand: Vec<&str> = candidate.iter().map(AsRef::as_ref).collect();
    let refr: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();

    if cand.is_empty() {
        return BleuReport {
            precisions: vec![0.0; max_n],
            brevity_penalty: 0.0,
            bleu: 0.0,
        };
    }

    let mut precisions = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        precisions.push(clipped_precision(&cand, &refr, n));
    }

    let len_c = cand.len() as f64;
    let len_r = refr.len() as f64;
    let brevity_penalty = if len_c > len_r { 1.0 } else { (1.0 - len_r / len_c).exp() };

    let bleu = if precisions.contains(&0.0) {
        0.0
    } else {
        let mean_log: f64 = precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
        brevity_penalty * mean_log.exp()
    };

    BleuReport { precisions, brevity_penalty, bleu }
}

fn clipped_precision(cand: &[&str], refr: &[&str], n: usize) -> f64 {
    if cand.len() < n {
        return 0.0;
    }
    let cand_counts = ngram_counts(cand, n);
    let ref_counts = ngram_counts(refr, n);
    let total: u64 = cand_counts.values().sum();
    let clipped: u64 = cand_counts
        .iter()
        .map(|(gram, &count)| count.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    clipped as f64 / total as f64
}

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], u64> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Shannon entropy of the sentence's bigram distribution, in bits.
///
/// Summed over *distinct* bigram types (u, v): joint probability
/// `count(u,v) / (n-1)` times the information of the conditional
/// `count(u,v) / count(·,v)`, where `count(·,v)` counts bigrams whose
/// second token is v. Sequences shorter than two tokens carry no bigram
/// information and score 0.
pub fn bigram_entropy<S: AsRef<str>>(tokens: &[S]) -> f64 {
    bigram_entropy_in_base(tokens, 2.0)
}

/// [`bigram_entropy`] with a caller-chosen logarithm base (> 1).
pub fn bigram_entropy_in_base<S: AsRef<str>>(tokens: &[S], base: f64) -> f64 {
    assert!(base > 1.0, "logarithm base must exceed 1");
    let toks: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    if toks.len() < 2 {
        return 0.0;
    }
    let mut joint: HashMap<(&str, &str), u64> = HashMap::new();
    let mut second: HashMap<&str, u64> = HashMap::new();
    for pair in toks.windows(2) {
        *joint.entry((pair[0], pair[1])).or_insert(0) += 1;
        *second.entry(pair[1]).or_insert(0) += 1;
    }
    let total = (toks.len() - 1) as f64;
    let mut entropy = 0.0;
    for (&(_, v), &count) in &joint {
        let p_joint = count as f64 / total;
        let p_cond = count as f64 / second[v] as f64;
        entropy -= p_joint * (p_cond.ln() / base.ln());
    }
    // Deterministic conditionals contribute -0.0 terms; normalize the sign.
    entropy + 0.0
}

/// Ratio of round-trip bigram entropy to original bigram entropy.
///
/// Both zero (e.g. two single-token sentences) is treated as a lossless
/// round trip, 1.0. A zero-entropy original with a non-zero round trip has
/// no finite ratio and returns `f64::INFINITY`.
pub fn entropy_loss<S: AsRef<str>>(original: &[S], round_trip: &[S]) -> f64 {
    let h_original = bigram_entropy(original);
    let h_round_trip = bigram_entropy(round_trip);
    if h_original == 0.0 {
        if h_round_trip == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        h_round_trip / h_original
    }
}

/// Token-level micro-averaged F1. Serialized as
/// `{tp, fp, fn, precision, recall, f1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Report {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub false_negatives: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Micro F1 over full BIO tags (`B-PER` and `I-PER` count as different
/// tags). Per token: an exact non-O match is a true positive; a non-O
/// prediction that differs from gold is a false positive; a non-O gold
/// whose prediction differs is a false negative — so a PER/LOC confusion
/// costs both. Zero-denominator precision, recall, and F1 are 0.
pub fn micro_f1(gold: &[Vec<BioTag>], predictions: &[Vec<BioTag>]) -> Result<F1Report, MetricsError> {
    if gold.len() != predictions.len() {
        return Err(MetricsError::SentenceCountMismatch {
            gold: gold.len(),
            predictions: predictions.len(),
        });
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut false_negatives = 0u64;
    for (index, (g_tags, p_tags)) in gold.iter().zip(predictions).enumerate() {
        if g_tags.len() != p_tags.len() {
            return Err(MetricsError::TagCountMismatch {
                index,
                gold: g_tags.len(),
                predictions: p_tags.len(),
            });
        }
        for (g, p) in g_tags.iter().zip(p_tags) {
            if p == g {
                if !g.is_outside() {
                    tp += 1;
                }
            } else {
                if !p.is_outside() {
                    fp += 1;
                }
                if !g.is_outside() {
                    false_negatives += 1;
                }
            }
        }
    }
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + false_negatives);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(F1Report { tp, fp, false_negatives, precision, recall, f1 })
}

fn ratio(numerator: u64, denominator: u64) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

/// Aggregate report for a run; absent sections are omitted rather than
/// reported as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MetricReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bleu: Option<BleuReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_loss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<F1Report>,
}
