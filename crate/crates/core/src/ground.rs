use crate::normalize::NormalizationPolicy;

/// Locates a translated mention inside a tokenized sentence, returning the
/// token range `start..end` of the match.
///
/// Candidate and window text are compared under `policy` after joining the
/// window's tokens two ways: with single spaces (for spaced scripts) and
/// with no separator at all (for scripts like Chinese where one surface
/// word spans several single-character tokens). A window matches when
/// either joining equals the normalized candidate.
///
/// Windows are scanned by ascending start position, then ascending length,
/// up to `max_span_tokens` tokens; the first match wins, which makes the
/// result the leftmost, and among those the shortest. Returns `None` when
/// the candidate (after normalization) is empty or occurs nowhere.
pub fn ground_span(
    candidate: &str,
    tokens: &[String],
    policy: &NormalizationPolicy,
    max_span_tokens: usize,
) -> Option<(usize, usize)> {
    let needle = policy.normalize(candidate);
    if needle.is_empty() || max_span_tokens == 0 {
        return None;
    }
    let n = tokens.len();
    for start in 0..n {
        let limit = n.min(start + max_span_tokens);
        for end in (start + 1)..=limit {
            let window = &tokens[start..end];
            if policy.normalize(&window.join(" ")) == needle
                || policy.normalize(&window.concat()) == needle
            {
                return Some((start, end));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn finds_space_joined_match() {
        let tokens = toks(&["I", "met", "John", "Smith", "today"]);
        let got = ground_span("John Smith", &tokens, &NormalizationPolicy::default(), 10);
        assert_eq!(got, Some((2, 4)));
    }

    #[test]
    fn finds_concatenated_match_in_character_tokens() {
        let tokens = toks(&["我", "爱", "北", "京"]);
        let got = ground_span("北京", &tokens, &NormalizationPolicy::default(), 10);
        assert_eq!(got, Some((2, 4)));
    }

    #[test]
    fn absent_candidate_returns_none() {
        let tokens = toks(&["我", "爱", "北", "京"]);
        assert_eq!(ground_span("上海", &tokens, &NormalizationPolicy::default(), 10), None);
    }

    #[test]
    fn prefers_leftmost_then_shortest() {
        // "a a" occurs starting at 0 (len 2) and at 1 (len 2); leftmost wins.
        let tokens = toks(&["a", "a", "a"]);
        assert_eq!(ground_span("a a", &tokens, &NormalizationPolicy::default(), 10), Some((0, 2)));
        // At a fixed start, the shorter window is tried first: "aa" as one
        // token beats "a"+"a" concatenated later.
        let tokens = toks(&["aa", "a"]);
        assert_eq!(ground_span("aa", &tokens, &NormalizationPolicy::default(), 10), Some((0, 1)));
    }

    #[test]
    fn respects_max_span_tokens() {
        let tokens = toks(&["a", "b", "c"]);
        assert_eq!(ground_span("a b c", &tokens, &NormalizationPolicy::default(), 2), None);
        assert_eq!(ground_span("a b c", &tokens, &NormalizationPolicy::default(), 3), Some((0, 3)));
    }

    #[test]
    fn normalization_applies_to_both_sides() {
        let tokens = toks(&["caf\u{0065}\u{0301}"]); // café in decomposed form
        assert_eq!(ground_span("café", &tokens, &NormalizationPolicy::default(), 10), Some((0, 1)));
        let tokens = toks(&["New", "York"]);
        assert_eq!(
            ground_span("  New   York ", &tokens, &NormalizationPolicy::default(), 10),
            Some((0, 2))
        );
    }

    #[test]
    fn empty_candidate_matches_nothing() {
        let tokens = toks(&["a"]);
        assert_eq!(ground_span("   ", &tokens, &NormalizationPolicy::default(), 10), None);
        assert_eq!(ground_span("a", &[], &NormalizationPolicy::default(), 10), None);
    }
}
