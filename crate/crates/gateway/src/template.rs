use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use eat_core::text::{render_template, TemplateError};
use sha2::{Digest, Sha256};

/// The five prompt slots of the dual-translation protocol. The short keys
/// (`p1t`, `p2t`, `pf`, `p1e`, `p2e`) are the stable names used in
/// template-override files and run manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateId {
    /// Round 1 forward: analyze the sentence's entities before translating.
    ForwardAnalysis,
    /// Rounds 2..n forward: translate, carrying the prior round's output.
    ForwardTranslation,
    /// Final call of either direction: reduce the conversation to the bare
    /// answer.
    Filter,
    /// Round 1 backward: translate one extracted entity into the source
    /// sentence's language.
    BackwardTranslation,
    /// Rounds 2..n backward: verify the candidate appears in the sentence.
    BackwardVerification,
}

impl TemplateId {
    pub const ALL: [TemplateId; 5] = [
        TemplateId::ForwardAnalysis,
        TemplateId::ForwardTranslation,
        TemplateId::Filter,
        TemplateId::BackwardTranslation,
        TemplateId::BackwardVerification,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            TemplateId::ForwardAnalysis => "p1t",
            TemplateId::ForwardTranslation => "p2t",
            TemplateId::Filter => "pf",
            TemplateId::BackwardTranslation => "p1e",
            TemplateId::BackwardVerification => "p2e",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for TemplateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateId::ALL
            .into_iter()
            .find(|id| id.key() == s)
            .ok_or_else(|| format!("unknown template id {s:?}; expected one of p1t, p2t, pf, p1e, p2e"))
    }
}

/// A prompt template with `{placeholder}` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub id: TemplateId,
    pub body: String,
}

impl PromptTemplate {
    pub fn render(&self, bindings: &BTreeMap<&str, &str>) -> Result<String, TemplateError> {
        render_template(&self.body, bindings)
    }

    /// SHA-256 of the body, recorded in run manifests so a replayed run can
    /// prove it used the same wording.
    pub fn body_digest(&self) -> String {
        hex::encode(Sha256::digest(self.body.as_bytes()))
    }
}

const DEFAULT_FORWARD_ANALYSIS: &str = "You will translate a sentence from {target_lang} into {source_lang}. Before translating, think about the named entities the sentence may contain and briefly describe each one.\nSentence: {sentence}";

const DEFAULT_FORWARD_TRANSLATION: &str = "Now translate the sentence from {target_lang} into {source_lang}, taking the previous analysis into account and keeping every named entity.\nSentence: {sentence}";

const DEFAULT_FILTER: &str = "Output only the final answer, with no explanation and no extra words.";

const DEFAULT_BACKWARD_TRANSLATION: &str = "Translate the entity \"{entity}\" from {source_lang} into {target_lang}, knowing that it was extracted from a translation of this {target_lang} sentence. Analyze which part of the sentence it corresponds to.\nSentence: {sentence}";

const DEFAULT_BACKWARD_VERIFICATION: &str = "Check that your candidate translation appears verbatim in the original sentence; if it does not, correct it to the exact wording used there.\nSentence: {sentence}";

/// The full set of prompts a run uses, one per [`TemplateId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    templates: BTreeMap<TemplateId, PromptTemplate>,
}

impl Default for TemplateSet {
    fn default() -> Self {
        let mut templates = BTreeMap::new();
        for (id, body) in [
            (TemplateId::ForwardAnalysis, DEFAULT_FORWARD_ANALYSIS),
            (TemplateId::ForwardTranslation, DEFAULT_FORWARD_TRANSLATION),
            (TemplateId::Filter, DEFAULT_FILTER),
            (TemplateId::BackwardTranslation, DEFAULT_BACKWARD_TRANSLATION),
            (TemplateId::BackwardVerification, DEFAULT_BACKWARD_VERIFICATION),
        ] {
            templates.insert(id, PromptTemplate { id, body: body.to_string() });
        }
        TemplateSet { templates }
    }
}

impl TemplateSet {
    /// Default wording with some slots replaced. Keys must be template ids.
    pub fn with_overrides(overrides: &BTreeMap<String, String>) -> Result<Self, String> {
        let mut set = TemplateSet::default();
        for (key, body) in overrides {
            let id: TemplateId = key.parse()?;
            set.templates.insert(id, PromptTemplate { id, body: body.clone() });
        }
        Ok(set)
    }

    pub fn get(&self, id: TemplateId) -> &PromptTemplate {
        &self.templates[&id]
    }

    /// `key → body digest` for every template, manifest-ready.
    pub fn digests(&self) -> BTreeMap<String, String> {
        self.templates
            .values()
            .map(|t| (t.id.key().to_string(), t.body_digest()))
            .collect()
    }
}
