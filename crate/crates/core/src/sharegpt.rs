use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lang::LanguageCode;
use crate::text::{render_template, TemplateError};

/// One harvested alignment: an English entity name paired with the title
/// and first description sentence of the same article in another language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EaclPair {
    /// The entity as it appears in the English source list.
    pub english_entity: String,
    /// The linked article title in `language`.
    pub title: String,
    /// First sentence of that article's summary; always contains `title`
    /// under the harvest filter.
    pub first_sentence: String,
    pub language: LanguageCode,
}

/// One turn of a ShareGPT-style conversation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareGptTurn {
    pub from: String,
    pub value: String,
}

/// One instruction-tuning record: a human turn asking for the entity named
/// in a description, answered by the title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareGptRecord {
    pub conversations: Vec<ShareGptTurn>,
    pub source_entity: String,
    pub language: LanguageCode,
}

/// Default human-turn wording. `{entity}` is the English entity name and
/// `{description}` the first sentence in the target language.
pub const DEFAULT_INSTRUCTION: &str = "The entity \"{entity}\" is described in another language as: {description}\nReply with the name of this entity exactly as it appears in the description, and nothing else.";

/// Renders harvested pairs as a ShareGPT JSON array (pretty-printed, with
/// a trailing newline). Each record holds exactly one human/gpt exchange:
/// the rendered instruction and the target-language title as the answer.
pub fn write_sharegpt(pairs: &[EaclPair], instruction: &str) -> Result<String, TemplateError> {
    let mut records = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let bindings: BTreeMap<&str, &str> = [
            ("entity", pair.english_entity.as_str()),
            ("description", pair.first_sentence.as_str()),
        ]
        .into_iter()
        .collect();
        let prompt = render_template(instruction, &bindings)?;
        records.push(ShareGptRecord {
            conversations: vec![
                ShareGptTurn { from: "human".into(), value: prompt },
                ShareGptTurn { from: "gpt".into(), value: pair.title.clone() },
            ],
            source_entity: pair.english_entity.clone(),
            language: pair.language,
        });
    }
    let mut json = serde_json::to_string_pretty(&records).expect("records are plain data");
    json.push('\n');
    Ok(json)
}
