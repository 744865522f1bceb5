//! The RDF/XML subset used for knowledge-base documents.
//!
//! Two document shapes are accepted:
//!
//! * schema documents rooted at `rdf:RDF`, holding `rdfs:Class` elements
//!   (optionally with `rdfs:subClassOf`), `rdf:Property` elements with
//!   `rdfs:domain` / `rdfs:range` children, and instance elements;
//! * instance documents whose root is a single instance element, e.g.
//!
//! ```text
//! <vegetable rdf:ID="potato" xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
//!   <soilreq>KR256</soilreq>
//! </vegetable>
//! ```
//!
//! Instance elements are named after their class and carry one child per
//! asserted property, whose value is either the trimmed text content or an
//! `rdf:resource="#Name"` reference. Only `rdf:ID` identifies resources;
//! `rdf:about`, containers, typed literals and the rest of RDF/XML are
//! rejected as unknown constructs.

mod parse;
mod write;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::name::Name;

pub use parse::parse_document;
pub use write::{write_document, WriteError};

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";

/// Where a declaration came from: document id, byte range and 1-based lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Source {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub start_line: usize,
    pub end_line: usize,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start_line == self.end_line {
            write!(f, "{}:{}", self.doc_id, self.start_line)
        } else {
            write!(f, "{}:{}-{}", self.doc_id, self.start_line, self.end_line)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Value {
    Literal(String),
    Resource(Name),
}

impl Value {
    /// Literal text or referenced name, as shown to users.
    pub fn text(&self) -> &str {
        match self {
            Value::Literal(text) => text,
            Value::Resource(name) => name.as_str(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Assertion {
    pub property: Name,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decl {
    Class {
        name: Name,
    },
    Subclass {
        child: Name,
        parent: Name,
    },
    Property {
        name: Name,
        domains: Vec<Name>,
        ranges: Vec<Name>,
    },
    Instance {
        id: Name,
        class: Name,
        assertions: Vec<Assertion>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Declaration {
    pub decl: Decl,
    pub source: Source,
}

/// Document and line of a parse problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub doc_id: String,
    pub line: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.doc_id, self.line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{at}: malformed XML: {message}")]
    MalformedXml { at: Location, message: String },
    #[error("{at}: unsupported construct {construct}")]
    UnknownConstruct { at: Location, construct: String },
    #[error("{at}: <{element}> has no rdf:ID")]
    MissingId { at: Location, element: String },
    #[error("{at}: bad reference: {message}")]
    BadReference { at: Location, message: String },
    #[error("{at}: invalid name {text:?}")]
    InvalidName { at: Location, text: String },
}

impl ParseError {
    pub fn location(&self) -> &Location {
        match self {
            ParseError::MalformedXml { at, .. }
            | ParseError::UnknownConstruct { at, .. }
            | ParseError::MissingId { at, .. }
            | ParseError::BadReference { at, .. }
            | ParseError::InvalidName { at, .. } => at,
        }
    }
}
