//! Ontology-based domain search.
//!
//! A knowledge base is a set of documents in a small RDF/XML subset
//! ([`rdf`]) declaring classes, subclass links, properties with domains and
//! ranges, and instances with property assertions. [`ontology`] assembles
//! them into a validated class forest; [`lexicon`] maps names and synonyms
//! back to the entities they denote; [`query`] answers questions such as
//! "season required for mango" by relating the mentioned instance and class
//! through a property. [`cost`] holds the analytical search-cost model.

pub mod cost;
pub mod lexicon;
pub mod loader;
pub mod name;
pub mod ontology;
pub mod query;
pub mod rdf;
pub mod tokenize;

pub use lexicon::{Lexicon, MentionKind, SynonymRow, SynonymTable};
pub use loader::{LoadError, SearchEngine};
pub use name::Name;
pub use ontology::{InstanceRecord, KnowledgeBase, PropertyDef};
pub use query::{answer_query, extract, resolve, Answer, Extraction, Mode, QueryError};
pub use rdf::{parse_document, Declaration, Value};
