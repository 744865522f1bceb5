use std::fmt::Write as _;

use quick_xml::escape::escape;
use thiserror::Error;

use super::{Decl, Declaration, Value, RDFS_NS, RDF_NS};
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("subclass link {child} -> {parent} does not follow the declaration of {child}")]
    OrphanSubclass { child: Name, parent: Name },
    #[error("{0:?} cannot be used as an XML element name")]
    NotAnElementName(Name),
}

/// Serializes declarations as one `rdf:RDF` document that parses back to the
/// same declaration list.
///
/// Subclass links are nested inside the `rdfs:Class` element they follow, so
/// a link must come right after its class declaration (or after another link
/// of the same class), which is how [`parse_document`](super::parse_document)
/// emits them.
pub fn write_document<'a>(
    decls: impl IntoIterator<Item = &'a Declaration>,
) -> Result<String, WriteError> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\"?>\n");
    let _ = writeln!(
        out,
        "<rdf:RDF\n  xmlns:rdf=\"{RDF_NS}\"\n  xmlns:rdfs=\"{RDFS_NS}\">"
    );

    // Class whose element is still open, waiting for subClassOf children.
    let mut open: Option<Name> = None;
    for decl in decls {
        if let Decl::Subclass { child, parent } = &decl.decl {
            if open.as_ref().is_some_and(|c| c.is_identical(child)) {
                let _ = writeln!(out, "    <rdfs:subClassOf rdf:resource=\"#{parent}\"/>");
                continue;
            }
            return Err(WriteError::OrphanSubclass {
                child: child.clone(),
                parent: parent.clone(),
            });
        }
        if open.take().is_some() {
            out.push_str("  </rdfs:Class>\n");
        }
        match &decl.decl {
            Decl::Class { name } => {
                let _ = writeln!(out, "  <rdfs:Class rdf:ID=\"{name}\">");
                open = Some(name.clone());
            }
            Decl::Property {
                name,
                domains,
                ranges,
            } => {
                let _ = writeln!(out, "  <rdf:Property rdf:ID=\"{name}\">");
                for d in domains {
                    let _ = writeln!(out, "    <rdfs:domain rdf:resource=\"#{d}\"/>");
                }
                for r in ranges {
                    let _ = writeln!(out, "    <rdfs:range rdf:resource=\"#{r}\"/>");
                }
                out.push_str("  </rdf:Property>\n");
            }
            Decl::Instance {
                id,
                class,
                assertions,
            } => {
                element_name(class)?;
                let _ = writeln!(out, "  <{class} rdf:ID=\"{id}\">");
                for a in assertions {
                    let p = element_name(&a.property)?;
                    match &a.value {
                        Value::Literal(text) => {
                            let _ = writeln!(out, "    <{p}>{}</{p}>", escape(text.as_str()));
                        }
                        Value::Resource(target) => {
                            let _ = writeln!(out, "    <{p} rdf:resource=\"#{target}\"/>");
                        }
                    }
                }
                let _ = writeln!(out, "  </{class}>");
            }
            Decl::Subclass { .. } => unreachable!("handled above"),
        }
    }
    if open.is_some() {
        out.push_str("  </rdfs:Class>\n");
    }
    out.push_str("</rdf:RDF>\n");
    Ok(out)
}

fn element_name(name: &Name) -> Result<&Name, WriteError> {
    let first = name.as_str().chars().next();
    if first.is_some_and(|c| c.is_alphabetic() || c == '_') {
        Ok(name)
    } else {
        Err(WriteError::NotAnElementName(name.clone()))
    }
}
