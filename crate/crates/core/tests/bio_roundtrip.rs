//! Round-trip properties of the span/tag algebra on generated sequences.

use eat_core::lang::LanguageCode;
use eat_core::sentence::LabeledSentence;
use eat_core::span::{bio_from_spans, spans_from_bio, EntitySpan};
use eat_core::tag::{BioTag, EntityTag, TagSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn categories() -> Vec<EntityTag> {
    TagSet::person_location_organization().iter().cloned().collect()
}

/// Generates a well-formed BIO2 sequence of the given length.
fn random_bio(rng: &mut ChaCha8Rng, len: usize) -> Vec<BioTag> {
    let cats = categories();
    let mut tags: Vec<BioTag> = Vec::with_capacity(len);
    for i in 0..len {
        let can_continue = i > 0 && !tags[i - 1].is_outside();
        let roll = rng.random_range(0..10);
        let tag = if can_continue && roll < 4 {
            BioTag::Inside(tags[i - 1].entity().unwrap().clone())
        } else if roll < 7 {
            BioTag::Begin(cats[rng.random_range(0..cats.len())].clone())
        } else {
            BioTag::Outside
        };
        tags.push(tag);
    }
    tags
}

fn sentence_with(tags: Vec<BioTag>) -> LabeledSentence {
    let tokens: Vec<String> = (0..tags.len()).map(|i| format!("t{i}")).collect();
    LabeledSentence::new(0, tokens, tags, LanguageCode::new("en").unwrap()).unwrap()
}

#[test]
fn tags_to_spans_to_tags_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..500 {
        let len = rng.random_range(1..25);
        let tags = random_bio(&mut rng, len);
        let sentence = sentence_with(tags.clone());
        let spans = spans_from_bio(&sentence).unwrap();
        let rebuilt = bio_from_spans(len, &spans).unwrap();
        assert_eq!(rebuilt, tags, "case {case}");
    }
}

#[test]
fn spans_to_tags_to_spans_is_identity() {
    let per = EntityTag::new("PER").unwrap();
    let loc = EntityTag::new("LOC").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..300 {
        let len = rng.random_range(1..30usize);
        // Build a random non-overlapping span set left to right.
        let mut spans = Vec::new();
        let mut cursor = 0usize;
        while cursor < len {
            if rng.random_bool(0.4) {
                let width = rng.random_range(1..=(len - cursor).min(4));
                let tag = if rng.random_bool(0.5) { per.clone() } else { loc.clone() };
                let tokens: Vec<String> =
                    (cursor..cursor + width).map(|i| format!("t{i}")).collect();
                spans.push(
                    EntitySpan::new(cursor, cursor + width, tag, tokens.join(" ")).unwrap(),
                );
                cursor += width;
            } else {
                cursor += 1;
            }
        }
        let tags = bio_from_spans(len, &spans).unwrap();
        let tokens: Vec<String> = (0..len).map(|i| format!("t{i}")).collect();
        let sentence =
            LabeledSentence::new(0, tokens, tags, LanguageCode::new("en").unwrap()).unwrap();
        let recovered = spans_from_bio(&sentence).unwrap();
        assert_eq!(recovered, spans, "case {case}");
    }
}

#[test]
fn adjacent_same_category_spans_survive_the_round_trip() {
    // B-LOC B-LOC must not merge into one two-token span.
    let loc = EntityTag::new("LOC").unwrap();
    let spans = vec![
        EntitySpan::new(0, 1, loc.clone(), "t0".into()).unwrap(),
        EntitySpan::new(1, 2, loc.clone(), "t1".into()).unwrap(),
    ];
    let tags = bio_from_spans(2, &spans).unwrap();
    assert_eq!(tags.iter().map(BioTag::to_string).collect::<Vec<_>>(), ["B-LOC", "B-LOC"]);
    let sentence = LabeledSentence::new(
        0,
        vec!["t0".into(), "t1".into()],
        tags,
        LanguageCode::new("en").unwrap(),
    )
    .unwrap();
    assert_eq!(spans_from_bio(&sentence).unwrap(), spans);
}
