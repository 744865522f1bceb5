//! Class and instance lexicons: surface phrases (names and their synonyms)
//! mapped to the canonical names they stand for.
//!
//! Synonym files are CSV with a `kind,canonical,surface` header, where kind is
//! `class` or `instance`; lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::Name;
use crate::ontology::KnowledgeBase;
use crate::tokenize::tokenize;

/// Longest surface phrase, in words.
pub const MAX_PHRASE_WORDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionKind {
    Class,
    Instance,
}

impl fmt::Display for MentionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MentionKind::Class => "class",
            MentionKind::Instance => "instance",
        })
    }
}

impl FromStr for MentionKind {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "class" => Ok(MentionKind::Class),
            "instance" => Ok(MentionKind::Instance),
            other => Err(LexiconError::BadRow(format!("unknown kind {other:?}"))),
        }
    }
}

/// A synonym row: `surface` is another way of writing `canonical`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymRow {
    pub kind: MentionKind,
    pub canonical: Name,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("synonym {surface:?} names unknown {kind} {canonical}")]
    UnknownCanonical {
        kind: MentionKind,
        canonical: Name,
        surface: String,
    },
    #[error("{kind} synonym {surface:?} maps to both {first} and {second}")]
    ConflictingSynonym {
        kind: MentionKind,
        surface: String,
        first: Name,
        second: Name,
    },
    #[error("synonym {surface:?} must have 1 to {MAX_PHRASE_WORDS} words")]
    BadSurface { surface: String },
    #[error("bad synonym row: {0}")]
    BadRow(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymTable {
    kind: MentionKind,
    entries: BTreeMap<String, Name>,
}

impl SynonymTable {
    fn new(kind: MentionKind) -> Self {
        SynonymTable {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> MentionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(surface, canonical)` pairs ordered by surface.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &Name)> {
        self.entries.iter().map(|(s, n)| (s.as_str(), n))
    }

    /// Exact phrase lookup after lowercasing and whitespace normalization.
    pub fn lookup(&self, phrase: &str) -> Option<&Name> {
        self.entries.get(&normalize(phrase)?)
    }

    pub(crate) fn lookup_tokens(&self, tokens: &[String]) -> Option<&Name> {
        self.entries.get(&tokens.join(" "))
    }

    fn insert(&mut self, surface: &str, canonical: &Name) -> Result<(), LexiconError> {
        let key = normalize(surface).ok_or_else(|| LexiconError::BadSurface {
            surface: surface.to_string(),
        })?;
        match self.entries.get(&key) {
            Some(existing) if existing == canonical => Ok(()),
            Some(existing) => Err(LexiconError::ConflictingSynonym {
                kind: self.kind,
                surface: key,
                first: existing.clone(),
                second: canonical.clone(),
            }),
            None => {
                self.entries.insert(key, canonical.clone());
                Ok(())
            }
        }
    }
}

/// Lowercased words joined by single spaces; `None` for an empty phrase or
/// one longer than [`MAX_PHRASE_WORDS`].
fn normalize(phrase: &str) -> Option<String> {
    let words = tokenize(phrase);
    if words.is_empty() || words.len() > MAX_PHRASE_WORDS {
        return None;
    }
    Some(words.join(" "))
}

/// The class and instance lexicons for one knowledge base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub classes: SynonymTable,
    pub instances: SynonymTable,
}

impl Lexicon {
    /// Seeds an identity row for every class and instance of `kb`, then adds
    /// `extra_rows`. All problems are collected.
    pub fn build(kb: &KnowledgeBase, extra_rows: &[SynonymRow]) -> Result<Self, Vec<LexiconError>> {
        let mut lex = Lexicon {
            classes: SynonymTable::new(MentionKind::Class),
            instances: SynonymTable::new(MentionKind::Instance),
        };
        let mut errors = Vec::new();
        for class in kb.class_names() {
            if let Err(e) = lex.classes.insert(class.as_str(), class) {
                errors.push(e);
            }
        }
        for rec in kb.instances() {
            if let Err(e) = lex.instances.insert(rec.id.as_str(), &rec.id) {
                errors.push(e);
            }
        }
        for row in extra_rows {
            let canonical = match row.kind {
                MentionKind::Class => kb.class(&row.canonical),
                MentionKind::Instance => kb.instance(&row.canonical).map(|r| &r.id),
            };
            let Some(canonical) = canonical else {
                errors.push(LexiconError::UnknownCanonical {
                    kind: row.kind,
                    canonical: row.canonical.clone(),
                    surface: row.surface.clone(),
                });
                continue;
            };
            let table = match row.kind {
                MentionKind::Class => &mut lex.classes,
                MentionKind::Instance => &mut lex.instances,
            };
            if let Err(e) = table.insert(&row.surface, canonical) {
                errors.push(e);
            }
        }
        if errors.is_empty() {
            Ok(lex)
        } else {
            Err(errors)
        }
    }

    pub fn table(&self, kind: MentionKind) -> &SynonymTable {
        match kind {
            MentionKind::Class => &self.classes,
            MentionKind::Instance => &self.instances,
        }
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    kind: String,
    canonical: String,
    surface: String,
}

/// Reads synonym rows from CSV text.
pub fn read_synonyms(input: impl Read) -> Result<Vec<SynonymRow>, LexiconError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| LexiconError::BadRow(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["kind", "canonical", "surface"] {
        return Err(LexiconError::BadRow(format!(
            "expected header kind,canonical,surface, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for record in reader.deserialize::<CsvRow>() {
        let record = record.map_err(|e| LexiconError::BadRow(e.to_string()))?;
        let canonical = Name::new(record.canonical.as_str())
            .map_err(|e| LexiconError::BadRow(e.to_string()))?;
        rows.push(SynonymRow {
            kind: record.kind.parse()?,
            canonical,
            surface: record.surface,
        });
    }
    Ok(rows)
}
