//! Loading a knowledge-base directory: every `*.rdf` file below it, in sorted
//! path order, plus an optional `synonyms.csv` at its top level.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::lexicon::{read_synonyms, Lexicon, LexiconError, SynonymRow};
use crate::ontology::{BuildError, KnowledgeBase};
use crate::query::{extract, resolve, Answer, Extraction, QueryError};
use crate::rdf::{parse_document, Declaration, ParseError};

pub const SYNONYMS_FILE: &str = "synonyms.csv";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{} contains no .rdf files", .0.display())]
    NoDocuments(PathBuf),
    #[error("{}", render(.0))]
    Parse(Vec<ParseError>),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("{}: {}", SYNONYMS_FILE, render(.0))]
    Lexicon(Vec<LexiconError>),
}

fn render<E: std::fmt::Display>(errors: &[E]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// A validated knowledge base together with its lexicons.
#[derive(Debug, Clone)]
pub struct SearchEngine {
    kb: KnowledgeBase,
    lexicon: Lexicon,
}

impl SearchEngine {
    pub fn new(kb: KnowledgeBase, lexicon: Lexicon) -> Self {
        SearchEngine { kb, lexicon }
    }

    /// Reads, validates and indexes the knowledge base in `dir`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, LoadError> {
        let dir = dir.as_ref();
        let decls = read_declarations(dir)?;
        let rows = read_synonym_file(dir)?;
        Self::build(decls, &rows)
    }

    pub fn build(decls: Vec<Declaration>, synonyms: &[SynonymRow]) -> Result<Self, LoadError> {
        let kb = KnowledgeBase::build(decls)?;
        let lexicon = Lexicon::build(&kb, synonyms).map_err(LoadError::Lexicon)?;
        Ok(SearchEngine { kb, lexicon })
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn extract(&self, query: &str) -> Extraction {
        extract(&self.lexicon, query)
    }

    pub fn resolve(&self, extraction: &Extraction) -> Result<Answer, QueryError> {
        resolve(&self.kb, extraction)
    }

    pub fn answer(&self, query: &str) -> Result<Answer, QueryError> {
        self.resolve(&self.extract(query))
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> LoadError {
    let path = path.to_path_buf();
    move |source| LoadError::Io { path, source }
}

/// Parses every `*.rdf` file below `dir`. Each declaration's `doc_id` is the
/// file's path relative to `dir`.
pub fn read_declarations(dir: &Path) -> Result<Vec<Declaration>, LoadError> {
    let mut decls = Vec::new();
    let mut parse_errors = Vec::new();
    let mut docs = 0;
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| LoadError::Io {
            path: e.path().unwrap_or(dir).to_path_buf(),
            source: e.into(),
        })?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|ext| ext != "rdf") {
            continue;
        }
        docs += 1;
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        let doc_id = path.strip_prefix(dir).unwrap_or(path).to_string_lossy();
        match parse_document(&text, &doc_id) {
            Ok(found) => decls.extend(found),
            Err(e) => parse_errors.push(e),
        }
    }
    if docs == 0 {
        return Err(LoadError::NoDocuments(dir.to_path_buf()));
    }
    if !parse_errors.is_empty() {
        return Err(LoadError::Parse(parse_errors));
    }
    Ok(decls)
}

/// Rows of `dir/synonyms.csv`, or none if the file is absent.
pub fn read_synonym_file(dir: &Path) -> Result<Vec<SynonymRow>, LoadError> {
    let path = dir.join(SYNONYMS_FILE);
    if !path.is_file() {
        return Ok(Vec::new());
    }
    let file = File::open(&path).map_err(io_error(&path))?;
    read_synonyms(file).map_err(|e| LoadError::Lexicon(vec![e]))
}
