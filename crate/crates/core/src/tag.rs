use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An entity category such as `PER`, `LOC`, or `ORG`.
///
/// The set of valid categories is run-configurable (see [`TagSet`]); the
/// type itself only guarantees a non-empty name without whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityTag(String);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagError {
    #[error("entity tag {0:?} is empty or contains whitespace")]
    InvalidName(String),
    #[error("unknown entity tag {0:?}")]
    UnknownTag(String),
    #[error("malformed BIO tag {0:?}: expected O, B-<TAG>, or I-<TAG>")]
    MalformedBio(String),
}

impl EntityTag {
    pub fn new(name: &str) -> Result<Self, TagError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            Err(TagError::InvalidName(name.to_string()))
        } else {
            Ok(EntityTag(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The closed set of entity categories a run recognizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagSet {
    tags: Vec<EntityTag>,
}

impl TagSet {
    /// Builds a tag set from names, preserving order and rejecting duplicates.
    pub fn new<I, S>(names: I) -> Result<Self, TagError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut tags: Vec<EntityTag> = Vec::new();
        for name in names {
            let tag = EntityTag::new(name.as_ref())?;
            if !tags.contains(&tag) {
                tags.push(tag);
            }
        }
        Ok(TagSet { tags })
    }

    /// The conventional three-category set used by multilingual NER corpora.
    pub fn person_location_organization() -> Self {
        TagSet::new(["PER", "LOC", "ORG"]).unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EntityTag> {
        self.tags.iter()
    }

    pub fn contains(&self, tag: &EntityTag) -> bool {
        self.tags.contains(tag)
    }

    /// Looks up a tag by name, e.g. from an extractor answer.
    pub fn get(&self, name: &str) -> Option<&EntityTag> {
        self.tags.iter().find(|t| t.as_str() == name)
    }

    /// Comma-separated names, in declaration order.
    pub fn joined(&self) -> String {
        let names: Vec<&str> = self.tags.iter().map(EntityTag::as_str).collect();
        names.join(", ")
    }
}

/// One token's position in the BIO2 scheme: outside any entity, beginning
/// an entity, or inside (continuing) one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BioTag {
    Outside,
    Begin(EntityTag),
    Inside(EntityTag),
}

impl BioTag {
    /// Parses a surface tag (`O`, `B-PER`, `I-LOC`, ...) against a tag set.
    pub fn parse(text: &str, tags: &TagSet) -> Result<Self, TagError> {
        if text == "O" {
            return Ok(BioTag::Outside);
        }
        let (prefix, name) = match text.split_once('-') {
            Some(parts) => parts,
            None => return Err(TagError::MalformedBio(text.to_string())),
        };
        if name.is_empty() {
            return Err(TagError::MalformedBio(text.to_string()));
        }
        let tag = tags
            .get(name)
            .cloned()
            .ok_or_else(|| TagError::UnknownTag(name.to_string()))?;
        match prefix {
            "B" => Ok(BioTag::Begin(tag)),
            "I" => Ok(BioTag::Inside(tag)),
            _ => Err(TagError::MalformedBio(text.to_string())),
        }
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, BioTag::Outside)
    }

    /// The entity category, if any.
    pub fn entity(&self) -> Option<&EntityTag> {
        match self {
            BioTag::Outside => None,
            BioTag::Begin(t) | BioTag::Inside(t) => Some(t),
        }
    }
}

impl fmt::Display for BioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BioTag::Outside => f.write_str("O"),
            BioTag::Begin(t) => write!(f, "B-{t}"),
            BioTag::Inside(t) => write!(f, "I-{t}"),
        }
    }
}
