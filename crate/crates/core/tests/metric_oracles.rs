//! Cross-checks the metric kernels against independently written oracles:
//! BLEU by explicit n-gram enumeration (no shared code) and bigram entropy
//! by the position-sum formulation, which is algebraically equal to the
//! type-sum the implementation uses.

use eat_core::metrics::{bigram_entropy, bigram_entropy_in_base, bleu, entropy_loss};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// BLEU computed the slow way: for every distinct candidate n-gram, count
/// occurrences in candidate and reference by linear scan and clip.
fn oracle_bleu(candidate: &[String], reference: &[String], max_n: usize) -> (Vec<f64>, f64, f64) {
    if candidate.is_empty() {
        return (vec![0.0; max_n], 0.0, 0.0);
    }
    let mut precisions = Vec::new();
    for n in 1..=max_n {
        if candidate.len() < n {
            precisions.push(0.0);
            continue;
        }
        let cand_grams: Vec<&[String]> = candidate.windows(n).collect();
        let ref_grams: Vec<&[String]> = reference.windows(n).collect();
        let mut seen: Vec<&[String]> = Vec::new();
        let mut clipped = 0usize;
        for gram in &cand_grams {
            if seen.iter().any(|s| s == gram) {
                continue;
            }
            seen.push(gram);
            let in_cand = cand_grams.iter().filter(|g| g == &gram).count();
            let in_ref = ref_grams.iter().filter(|g| g == &gram).count();
            clipped += in_cand.min(in_ref);
        }
        precisions.push(clipped as f64 / cand_grams.len() as f64);
    }
    let len_c = candidate.len() as f64;
    let len_r = reference.len() as f64;
    let bp = if len_c > len_r { 1.0 } else { (1.0 - len_r / len_c).exp() };
    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        bp * (precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64).exp()
    };
    (precisions, bp, score)
}

/// Entropy summed per bigram *position* (each position contributes
/// `-log2 P(prev | cur) / (n-1)`), which must equal the per-type sum.
fn oracle_entropy_bits(tokens: &[String]) -> f64 {
    let n = tokens.len();
    if n < 2 {
        return 0.0;
    }
    let pairs: Vec<(&str, &str)> = tokens
        .windows(2)
        .map(|w| (w[0].as_str(), w[1].as_str()))
        .collect();
    let mut total = 0.0;
    for &(u, v) in &pairs {
        let joint = pairs.iter().filter(|&&p| p == (u, v)).count() as f64;
        let second = pairs.iter().filter(|&&(_, s)| s == v).count() as f64;
        total += -(joint / second).log2() / (n - 1) as f64;
    }
    total
}

fn random_sentence(rng: &mut ChaCha8Rng, alphabet: &[&str], min_len: usize, max_len: usize) -> Vec<String> {
    let len = rng.random_range(min_len..=max_len);
    (0..len)
        .map(|_| alphabet[rng.random_range(0..alphabet.len())].to_string())
        .collect()
}

#[test]
fn bleu_matches_enumeration_oracle_on_random_pairs() {
    let alphabet = ["a", "b", "c", "d", "e"];
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for case in 0..60 {
        let candidate = random_sentence(&mut rng, &alphabet, 4, 30);
        let reference = random_sentence(&mut rng, &alphabet, 4, 30);
        let got = bleu(&candidate, &reference, 4);
        let (want_p, want_bp, want_score) = oracle_bleu(&candidate, &reference, 4);
        for (g, w) in got.precisions.iter().zip(&want_p) {
            assert!((g - w).abs() < 1e-9, "case {case}: precision {g} vs {w}");
        }
        assert!((got.brevity_penalty - want_bp).abs() < 1e-9, "case {case}: bp");
        assert!((got.bleu - want_score).abs() < 1e-9, "case {case}: score");
    }
}

#[test]
fn bleu_frozen_hand_value() {
    let candidate: Vec<String> = "the cat sat on mat".split(' ').map(String::from).collect();
    let reference: Vec<String> =
        "the cat sat on the mat".split(' ').map(String::from).collect();
    let report = bleu(&candidate, &reference, 4);
    // e^(1 - 6/5) * (1 * 3/4 * 2/3 * 1/2)^(1/4) = e^(-0.2) / sqrt(2)
    assert!((report.bleu - 0.578_930_067_5).abs() < 1e-9, "got {}", report.bleu);
}

#[test]
fn entropy_matches_position_sum_oracle_on_random_sentences() {
    let alphabet = ["x", "y", "z", "w"];
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for case in 0..60 {
        let tokens = random_sentence(&mut rng, &alphabet, 2, 40);
        let got = bigram_entropy(&tokens);
        let want = oracle_entropy_bits(&tokens);
        assert!((got - want).abs() < 1e-9, "case {case}: {got} vs {want}");
    }
}

#[test]
fn entropy_loss_is_base_independent() {
    // The ratio of two entropies is the same in any base; spot-check that
    // computing both numerator and denominator in nats gives the bit ratio.
    let original: Vec<String> = "a b a c b a".split(' ').map(String::from).collect();
    let round_trip: Vec<String> = "a b a b a".split(' ').map(String::from).collect();
    let ratio_bits = entropy_loss(&original, &round_trip);
    let e = std::f64::consts::E;
    let ratio_nats =
        bigram_entropy_in_base(&round_trip, e) / bigram_entropy_in_base(&original, e);
    assert!((ratio_bits - ratio_nats).abs() < 1e-9);
}
