use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Identifier of a class, instance or property.
///
/// Names keep the case they were written in but compare, order and hash
/// case-insensitively, so `Vegetable` and `vegetable` are the same class.
#[derive(Clone)]
pub struct Name(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidName {
    #[error("name is empty")]
    Empty,
    #[error("name {0:?} contains a character other than a letter, digit, '_' or '-'")]
    BadChar(String),
}

impl Name {
    pub fn new(text: impl Into<String>) -> Result<Self, InvalidName> {
        let text = text.into();
        if text.is_empty() {
            return Err(InvalidName::Empty);
        }
        if !text.chars().all(is_name_char) {
            return Err(InvalidName::BadChar(text));
        }
        Ok(Name(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Lowercased form used for comparisons and lexicon keys.
    pub fn folded(&self) -> String {
        self.0.to_lowercase()
    }

    /// True when both names are equal and spelled with the same case.
    pub fn is_identical(&self, other: &Name) -> bool {
        self.0 == other.0
    }
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn fold_chars(s: &str) -> impl Iterator<Item = char> + '_ {
    s.chars().flat_map(char::to_lowercase)
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        fold_chars(&self.0).eq(fold_chars(&other.0))
    }
}

impl Eq for Name {}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        fold_chars(&self.0).cmp(fold_chars(&other.0))
    }
}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in fold_chars(&self.0) {
            c.hash(state);
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl TryFrom<&str> for Name {
    type Error = InvalidName;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Name::new(value)
    }
}

#[cfg(test)]
pub(crate) fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}
