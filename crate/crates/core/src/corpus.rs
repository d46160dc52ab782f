use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::LanguageCode;
use crate::sentence::{first_dangling_inside, LabeledSentence};
use crate::tag::{BioTag, TagError, TagSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("file is not valid UTF-8 (bad byte at offset {offset})")]
    InvalidUtf8 { offset: usize },
    #[error("line {line}: expected `token<TAB or space>tag`, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: {source}")]
    BadTag { line: usize, source: TagError },
    #[error("line {line}: I- tag does not continue a same-category entity")]
    NotBio2 { line: usize },
    #[error("prediction count {predictions} does not match sentence count {sentences}")]
    SentenceCountMismatch { sentences: usize, predictions: usize },
    #[error("sentence {id}: {tokens} tokens but {tags} predicted tags")]
    TagCountMismatch { id: usize, tokens: usize, tags: usize },
}

/// Which portion of a dataset a file holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    Train,
    Valid,
    Test,
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitName::Train => "train",
            SplitName::Valid => "valid",
            SplitName::Test => "test",
        })
    }
}

impl FromStr for SplitName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(SplitName::Train),
            "valid" | "dev" => Ok(SplitName::Valid),
            "test" => Ok(SplitName::Test),
            other => Err(format!("unknown split name {other:?}")),
        }
    }
}

/// One split of a BIO-tagged corpus in a single language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub sentences: Vec<LabeledSentence>,
    pub language: LanguageCode,
    pub split_name: SplitName,
}

impl DatasetSplit {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(LabeledSentence::len).sum()
    }
}

/// Parses a column-format BIO file: one `token<TAB or space>tag` pair per
/// line, blank line between sentences. Extra middle columns (as in CoNLL
/// files) are ignored — the token is the first field and the tag the last.
/// Sentence ids are assigned by position, starting at 0.
pub fn parse_bio_file(
    bytes: &[u8],
    language: LanguageCode,
    tags: &TagSet,
    split_name: SplitName,
) -> Result<DatasetSplit, CorpusError> {
    let content = std::str::from_utf8(bytes)
        .map_err(|e| CorpusError::InvalidUtf8 { offset: e.valid_up_to() })?;

    let mut sentences: Vec<LabeledSentence> = Vec::new();
    let mut tokens: Vec<String> = Vec::new();
    let mut bio: Vec<BioTag> = Vec::new();

    let mut flush = |tokens: &mut Vec<String>, bio: &mut Vec<BioTag>| {
        if !tokens.is_empty() {
            let id = sentences.len();
            // Field presence and BIO2 shape were checked line by line, so
            // construction cannot fail here.
            let sentence = LabeledSentence::new(
                id,
                std::mem::take(tokens),
                std::mem::take(bio),
                language,
            )
            .expect("line-level validation guarantees a well-formed sentence");
            sentences.push(sentence);
        }
    };

    for (idx, raw_line) in content.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.trim().is_empty() {
            flush(&mut tokens, &mut bio);
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().expect("non-blank line has a first field");
        let tag_text = match fields.next_back() {
            Some(last) => last,
            None => {
                return Err(CorpusError::MalformedLine { line: line_no, text: line.to_string() })
            }
        };
        let tag = BioTag::parse(tag_text, tags)
            .map_err(|source| CorpusError::BadTag { line: line_no, source })?;
        // Validate BIO2 incrementally so the error names the exact line.
        if let BioTag::Inside(cat) = &tag {
            let continues = matches!(
                bio.last(),
                Some(BioTag::Begin(prev)) | Some(BioTag::Inside(prev)) if prev == cat
            );
            if !continues {
                return Err(CorpusError::NotBio2 { line: line_no });
            }
        }
        tokens.push(token.to_string());
        bio.push(tag);
    }
    flush(&mut tokens, &mut bio);

    debug_assert!(sentences
        .iter()
        .all(|s| first_dangling_inside(&s.tags).is_none()));

    Ok(DatasetSplit { sentences, language, split_name })
}

/// Renders predicted tags for every sentence of a split back into column
/// format: `token<TAB>tag` lines, one blank line after each sentence.
/// Prediction shape must match the split exactly.
pub fn write_predictions(
    split: &DatasetSplit,
    predictions: &[Vec<BioTag>],
) -> Result<String, CorpusError> {
    if predictions.len() != split.sentences.len() {
        return Err(CorpusError::SentenceCountMismatch {
            sentences: split.sentences.len(),
            predictions: predictions.len(),
        });
    }
    let mut out = String::new();
    for (sentence, tags) in split.sentences.iter().zip(predictions) {
        if tags.len() != sentence.len() {
            return Err(CorpusError::TagCountMismatch {
                id: sentence.id,
                tokens: sentence.len(),
                tags: tags.len(),
            });
        }
        for (token, tag) in sentence.tokens.iter().zip(tags) {
            out.push_str(token);
            out.push('\t');
            out.push_str(&tag.to_string());
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zh() -> LanguageCode {
        LanguageCode::new("zh").unwrap()
    }

    fn tags() -> TagSet {
        TagSet::person_location_organization()
    }

    #[test]
    fn parses_two_sentences_with_mixed_separators() {
        let text = "我\tO\n爱 O\n北 B-LOC\n京\tI-LOC\n\n你\tO\n";
        let split = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap();
        assert_eq!(split.sentences.len(), 2);
        assert_eq!(split.sentences[0].tokens, ["我", "爱", "北", "京"]);
        assert_eq!(split.sentences[0].tags[2].to_string(), "B-LOC");
        assert_eq!(split.sentences[1].tokens, ["你"]);
        assert_eq!(split.sentences[1].id, 1);
        assert_eq!(split.token_count(), 5);
    }

    #[test]
    fn empty_file_yields_empty_split() {
        let split = parse_bio_file(b"", zh(), &tags(), SplitName::Test).unwrap();
        assert!(split.sentences.is_empty());
        let split = parse_bio_file(b"\n\n\n", zh(), &tags(), SplitName::Test).unwrap();
        assert!(split.sentences.is_empty());
    }

    #[test]
    fn extra_middle_columns_are_ignored() {
        let text = "EU NNP B-NP B-ORG\nrejects VBZ B-VP O\n";
        let split = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Train).unwrap();
        assert_eq!(split.sentences[0].tokens, ["EU", "rejects"]);
        assert_eq!(split.sentences[0].tags[0].to_string(), "B-ORG");
    }

    #[test]
    fn error_names_the_offending_line() {
        let text = "好 O\n\n坏 I-PER\n";
        let err = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap_err();
        assert_eq!(err, CorpusError::NotBio2 { line: 3 });

        let text = "好 O\n单\n";
        let err = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap_err();
        assert!(matches!(err, CorpusError::MalformedLine { line: 2, .. }));

        let text = "好 B-XYZ\n";
        let err = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap_err();
        assert!(matches!(err, CorpusError::BadTag { line: 1, .. }));
    }

    #[test]
    fn invalid_utf8_is_reported() {
        let err = parse_bio_file(&[0x61, 0xff, 0x61], zh(), &tags(), SplitName::Test).unwrap_err();
        assert_eq!(err, CorpusError::InvalidUtf8 { offset: 1 });
    }

    #[test]
    fn write_then_parse_round_trips() {
        let text = "我 O\n北 B-LOC\n京 I-LOC\n\nAlice B-PER\n去 O\n";
        let split = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap();
        let predictions: Vec<Vec<BioTag>> =
            split.sentences.iter().map(|s| s.tags.clone()).collect();
        let written = write_predictions(&split, &predictions).unwrap();
        let reparsed = parse_bio_file(written.as_bytes(), zh(), &tags(), SplitName::Test).unwrap();
        assert_eq!(reparsed.sentences, split.sentences);
        // Canonical output: tabs, one blank line after every sentence.
        assert!(written.ends_with("去\tO\n\n"));
    }

    #[test]
    fn write_rejects_shape_mismatch() {
        let text = "我 O\n";
        let split = parse_bio_file(text.as_bytes(), zh(), &tags(), SplitName::Test).unwrap();
        assert!(matches!(
            write_predictions(&split, &[]),
            Err(CorpusError::SentenceCountMismatch { sentences: 1, predictions: 0 })
        ));
        assert!(matches!(
            write_predictions(&split, &[vec![BioTag::Outside, BioTag::Outside]]),
            Err(CorpusError::TagCountMismatch { id: 0, tokens: 1, tags: 2 })
        ));
    }
}
