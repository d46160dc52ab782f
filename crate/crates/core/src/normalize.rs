use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// Which Unicode normalization to apply before text comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnicodeForm {
    /// Canonical composition (NFC).
    #[default]
    Nfc,
    /// Leave code points as-is.
    None,
}

/// How candidate mentions and sentence text are normalized before they are
/// compared during span grounding and corpus filtering.
///
/// The default composes to NFC, keeps case distinctions, and collapses any
/// whitespace run to a single space (also trimming the ends). Applying the
/// policy twice gives the same result as applying it once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationPolicy {
    pub unicode_form: UnicodeForm,
    pub case_sensitive: bool,
    pub collapse_whitespace: bool,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        NormalizationPolicy {
            unicode_form: UnicodeForm::Nfc,
            case_sensitive: true,
            collapse_whitespace: true,
        }
    }
}

impl NormalizationPolicy {
    pub fn normalize(&self, text: &str) -> String {
        let composed: String = match self.unicode_form {
            UnicodeForm::Nfc => text.nfc().collect(),
            UnicodeForm::None => text.to_string(),
        };
        // Lowercasing can denormalize (e.g. İ → i + combining dot), so
        // compose again afterwards when NFC is requested.
        let cased: String = if self.case_sensitive {
            composed
        } else {
            let lowered = composed.to_lowercase();
            match self.unicode_form {
                UnicodeForm::Nfc => lowered.nfc().collect(),
                UnicodeForm::None => lowered,
            }
        };
        if self.collapse_whitespace {
            let mut out = String::with_capacity(cased.len());
            let mut pending_space = false;
            for ch in cased.chars() {
                if ch.is_whitespace() {
                    pending_space = !out.is_empty();
                } else {
                    if pending_space {
                        out.push(' ');
                        pending_space = false;
                    }
                    out.push(ch);
                }
            }
            out
        } else {
            cased
        }
    }

    /// True when the normalized needle occurs inside the normalized haystack.
    pub fn contains(&self, haystack: &str, needle: &str) -> bool {
        self.normalize(haystack).contains(&self.normalize(needle))
    }
}
