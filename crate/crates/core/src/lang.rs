use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Two-letter ISO 639-1 language code, stored lowercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageCode([u8; 2]);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid language code {0:?}: expected exactly two ASCII lowercase letters")]
pub struct LanguageCodeError(pub String);

impl LanguageCode {
    pub fn new(code: &str) -> Result<Self, LanguageCodeError> {
        let bytes = code.as_bytes();
        if bytes.len() == 2 && bytes.iter().all(|b| b.is_ascii_lowercase()) {
            Ok(LanguageCode([bytes[0], bytes[1]]))
        } else {
            Err(LanguageCodeError(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        // Both bytes are ASCII by construction.
        std::str::from_utf8(&self.0).unwrap()
    }

    /// English display name used when rendering prompts; falls back to the
    /// raw code for languages outside the table.
    pub fn english_name(&self) -> &str {
        match self.as_str() {
            "ar" => "Arabic",
            "de" => "German",
            "en" => "English",
            "es" => "Spanish",
            "fr" => "French",
            "hi" => "Hindi",
            "hy" => "Armenian",
            "id" => "Indonesian",
            "it" => "Italian",
            "ja" => "Japanese",
            "ka" => "Georgian",
            "ko" => "Korean",
            "nl" => "Dutch",
            "pt" => "Portuguese",
            "ru" => "Russian",
            "th" => "Thai",
            "tr" => "Turkish",
            "vi" => "Vietnamese",
            "zh" => "Chinese",
            _ => self.as_str(),
        }
    }

    pub const ENGLISH: LanguageCode = LanguageCode(*b"en");
}

impl FromStr for LanguageCode {
    type Err = LanguageCodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageCode::new(s)
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// Serialized as a plain string so the type also works as a JSON map key.
impl Serialize for LanguageCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LanguageCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CodeVisitor;
        impl Visitor<'_> for CodeVisitor {
            type Value = LanguageCode;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a two-letter lowercase language code")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                LanguageCode::new(v).map_err(E::custom)
            }
        }
        deserializer.deserialize_str(CodeVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_lowercase_pairs() {
        assert_eq!(LanguageCode::new("zh").unwrap().as_str(), "zh");
        assert_eq!("ja".parse::<LanguageCode>().unwrap().english_name(), "Japanese");
    }

    #[test]
    fn rejects_bad_codes() {
        for bad in ["ZH", "z", "zho", "z1", "", "z h"] {
            assert!(LanguageCode::new(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn unknown_code_falls_back_to_itself() {
        assert_eq!(LanguageCode::new("xx").unwrap().english_name(), "xx");
    }

    #[test]
    fn serde_round_trip_as_string() {
        let code = LanguageCode::new("ko").unwrap();
        let json = serde_json::to_string(&code).unwrap();
        assert_eq!(json, "\"ko\"");
        let back: LanguageCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, code);
    }
}
