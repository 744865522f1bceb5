use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::NsReader;

use super::{Assertion, Decl, Declaration, Location, ParseError, Source, Value, RDFS_NS, RDF_NS};
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Space {
    Rdf,
    Rdfs,
    Xml,
    /// Default namespace or no namespace: the domain vocabulary.
    Vocab,
    Other(String),
}

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

impl Space {
    fn from_resolved(resolved: ResolveResult<'_>) -> Space {
        match resolved {
            ResolveResult::Bound(ns) => {
                let uri = String::from_utf8_lossy(ns.as_ref());
                match uri.as_ref() {
                    RDF_NS => Space::Rdf,
                    RDFS_NS => Space::Rdfs,
                    XML_NS => Space::Xml,
                    _ => Space::Other(uri.into_owned()),
                }
            }
            // unprefixed elements outside the RDF namespaces are remapped to
            // Vocab by the caller
            ResolveResult::Unbound => Space::Vocab,
            // unknown prefixes are rejected while reading
            ResolveResult::Unknown(p) => Space::Other(String::from_utf8_lossy(&p).into_owned()),
        }
    }
}

#[derive(Debug)]
struct Attr {
    space: Space,
    local: String,
    qname: String,
    value: String,
}

#[derive(Debug)]
struct Elem {
    space: Space,
    local: String,
    qname: String,
    attrs: Vec<Attr>,
    text: String,
    children: Vec<Elem>,
    start: usize,
    end: usize,
}

struct Ctx<'a> {
    text: &'a str,
    doc_id: &'a str,
    line_starts: Vec<usize>,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        match self.line_starts.binary_search(&offset) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }

    fn at(&self, offset: usize) -> Location {
        Location {
            doc_id: self.doc_id.to_string(),
            line: self.line(offset),
        }
    }

    fn source(&self, elem: &Elem) -> Source {
        Source {
            doc_id: self.doc_id.to_string(),
            start: elem.start,
            end: elem.end,
            start_line: self.line(elem.start),
            end_line: self.line(elem.end.saturating_sub(1).max(elem.start)),
        }
    }

    fn malformed(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::MalformedXml {
            at: self.at(offset),
            message: message.into(),
        }
    }

    fn unknown(&self, offset: usize, construct: impl Into<String>) -> ParseError {
        ParseError::UnknownConstruct {
            at: self.at(offset),
            construct: construct.into(),
        }
    }
}

/// Parses one knowledge-base document into declarations, in document order.
///
/// `doc_id` is recorded in every declaration's [`Source`] and in errors.
pub fn parse_document(text: &str, doc_id: &str) -> Result<Vec<Declaration>, ParseError> {
    let mut line_starts = vec![0];
    line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
    let ctx = Ctx {
        text,
        doc_id,
        line_starts,
    };
    let root = read_tree(&ctx)?;
    let mut out = Vec::new();
    match (&root.space, root.local.as_str()) {
        (Space::Rdf, "RDF") => {
            check_attrs(&ctx, &root, &[])?;
            reject_text(&ctx, &root)?;
            for child in &root.children {
                match (&child.space, child.local.as_str()) {
                    (Space::Rdfs, "Class") => class_decl(&ctx, child, &mut out)?,
                    (Space::Rdf, "Property") => out.push(property_decl(&ctx, child)?),
                    (Space::Vocab, _) => out.push(instance_decl(&ctx, child)?),
                    _ => return Err(ctx.unknown(child.start, format!("<{}>", child.qname))),
                }
            }
        }
        (Space::Vocab, _) => out.push(instance_decl(&ctx, &root)?),
        _ => return Err(ctx.unknown(root.start, format!("<{}>", root.qname))),
    }
    Ok(out)
}

fn read_tree(ctx: &Ctx<'_>) -> Result<Elem, ParseError> {
    let mut reader = NsReader::from_str(ctx.text);
    let mut stack: Vec<Elem> = Vec::new();
    let mut root: Option<Elem> = None;
    loop {
        let before = reader.buffer_position() as usize;
        let event = match reader.read_event() {
            Ok(event) => event,
            Err(e) => return Err(ctx.malformed(reader.error_position() as usize, e.to_string())),
        };
        let after = reader.buffer_position() as usize;
        match event {
            Event::Start(_) | Event::Empty(_) if root.is_some() && stack.is_empty() => {
                return Err(ctx.malformed(before, "more than one root element"));
            }
            Event::Start(start) => {
                let elem = open_elem(ctx, &reader, &start, before)?;
                stack.push(elem);
            }
            Event::Empty(start) => {
                let mut elem = open_elem(ctx, &reader, &start, before)?;
                elem.end = after;
                attach(elem, &mut stack, &mut root);
            }
            Event::End(_) => {
                let mut elem = stack
                    .pop()
                    .ok_or_else(|| ctx.malformed(before, "unexpected closing tag"))?;
                elem.end = after;
                attach(elem, &mut stack, &mut root);
            }
            Event::Text(t) => {
                let s = t
                    .unescape()
                    .map_err(|e| ctx.malformed(before, e.to_string()))?;
                push_text(ctx, &mut stack, &s, before)?;
            }
            Event::CData(t) => {
                let s = String::from_utf8_lossy(&t).into_owned();
                push_text(ctx, &mut stack, &s, before)?;
            }
            Event::Comment(_) | Event::Decl(_) | Event::PI(_) => {}
            Event::DocType(_) => return Err(ctx.unknown(before, "<!DOCTYPE>")),
            Event::Eof => break,
        }
    }
    if let Some(open) = stack.last() {
        return Err(ctx.malformed(ctx.text.len(), format!("<{}> is never closed", open.qname)));
    }
    root.ok_or_else(|| ctx.malformed(0, "document has no root element"))
}

fn attach(elem: Elem, stack: &mut [Elem], root: &mut Option<Elem>) {
    match stack.last_mut() {
        Some(parent) => parent.children.push(elem),
        None => *root = Some(elem),
    }
}

fn push_text(ctx: &Ctx<'_>, stack: &mut [Elem], s: &str, at: usize) -> Result<(), ParseError> {
    match stack.last_mut() {
        Some(elem) => elem.text.push_str(s),
        None if s.trim().is_empty() => {}
        None => return Err(ctx.malformed(at, "text outside the root element")),
    }
    Ok(())
}

fn open_elem(
    ctx: &Ctx<'_>,
    reader: &NsReader<&[u8]>,
    start: &BytesStart<'_>,
    offset: usize,
) -> Result<Elem, ParseError> {
    let qname = String::from_utf8_lossy(start.name().as_ref()).into_owned();
    let (resolved, _) = reader.resolve_element(start.name());
    if let ResolveResult::Unknown(prefix) = &resolved {
        return Err(ctx.malformed(
            offset,
            format!("unbound prefix {:?}", String::from_utf8_lossy(prefix)),
        ));
    }
    let space = match Space::from_resolved(resolved) {
        Space::Other(_) if start.name().prefix().is_none() => Space::Vocab,
        space => space,
    };
    let local = String::from_utf8_lossy(start.local_name().as_ref()).into_owned();
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| ctx.malformed(offset, e.to_string()))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        if key == "xmlns" || key.starts_with("xmlns:") {
            continue;
        }
        let (res, local) = reader.resolve_attribute(attr.key);
        if let ResolveResult::Unknown(prefix) = &res {
            return Err(ctx.malformed(
                offset,
                format!("unbound prefix {:?}", String::from_utf8_lossy(prefix)),
            ));
        }
        let value = attr
            .unescape_value()
            .map_err(|e| ctx.malformed(offset, e.to_string()))?
            .into_owned();
        attrs.push(Attr {
            space: Space::from_resolved(res),
            local: String::from_utf8_lossy(local.as_ref()).into_owned(),
            qname: key,
            value,
        });
    }
    Ok(Elem {
        space,
        local,
        qname,
        attrs,
        text: String::new(),
        children: Vec::new(),
        start: offset,
        end: offset,
    })
}

/// Allows `xml:base` (ignored) plus the listed attributes; anything else,
/// including `rdf:about`, is outside the subset.
fn check_attrs(ctx: &Ctx<'_>, elem: &Elem, allowed: &[(Space, &str)]) -> Result<(), ParseError> {
    for attr in &elem.attrs {
        let ok = (attr.space == Space::Xml && attr.local == "base")
            || allowed
                .iter()
                .any(|(space, local)| *space == attr.space && *local == attr.local);
        if !ok {
            return Err(ctx.unknown(
                elem.start,
                format!("attribute {} on <{}>", attr.qname, elem.qname),
            ));
        }
    }
    Ok(())
}

fn attr<'e>(elem: &'e Elem, space: Space, local: &str) -> Option<&'e str> {
    elem.attrs
        .iter()
        .find(|a| a.space == space && a.local == local)
        .map(|a| a.value.as_str())
}

fn reject_text(ctx: &Ctx<'_>, elem: &Elem) -> Result<(), ParseError> {
    if elem.text.trim().is_empty() {
        Ok(())
    } else {
        Err(ctx.unknown(elem.start, format!("text content in <{}>", elem.qname)))
    }
}

fn reject_children(ctx: &Ctx<'_>, elem: &Elem) -> Result<(), ParseError> {
    match elem.children.first() {
        None => Ok(()),
        Some(child) => Err(ctx.unknown(
            child.start,
            format!("<{}> nested in <{}>", child.qname, elem.qname),
        )),
    }
}

fn name(ctx: &Ctx<'_>, offset: usize, text: &str) -> Result<Name, ParseError> {
    Name::new(text).map_err(|_| ParseError::InvalidName {
        at: ctx.at(offset),
        text: text.to_string(),
    })
}

fn rdf_id(ctx: &Ctx<'_>, elem: &Elem) -> Result<Name, ParseError> {
    match attr(elem, Space::Rdf, "ID") {
        Some(id) => name(ctx, elem.start, id),
        None => Err(ParseError::MissingId {
            at: ctx.at(elem.start),
            element: elem.qname.clone(),
        }),
    }
}

fn reference(ctx: &Ctx<'_>, elem: &Elem) -> Result<Name, ParseError> {
    let target = attr(elem, Space::Rdf, "resource").ok_or_else(|| ParseError::BadReference {
        at: ctx.at(elem.start),
        message: format!("<{}> needs an rdf:resource attribute", elem.qname),
    })?;
    fragment(ctx, elem, target)
}

fn fragment(ctx: &Ctx<'_>, elem: &Elem, target: &str) -> Result<Name, ParseError> {
    target
        .strip_prefix('#')
        .and_then(|frag| Name::new(frag).ok())
        .ok_or_else(|| ParseError::BadReference {
            at: ctx.at(elem.start),
            message: format!("{target:?} is not of the form \"#Name\""),
        })
}

fn class_decl(ctx: &Ctx<'_>, elem: &Elem, out: &mut Vec<Declaration>) -> Result<(), ParseError> {
    check_attrs(ctx, elem, &[(Space::Rdf, "ID")])?;
    reject_text(ctx, elem)?;
    let class = rdf_id(ctx, elem)?;
    out.push(Declaration {
        decl: Decl::Class {
            name: class.clone(),
        },
        source: ctx.source(elem),
    });
    for child in &elem.children {
        if child.space != Space::Rdfs || child.local != "subClassOf" {
            return Err(ctx.unknown(child.start, format!("<{}> in rdfs:Class", child.qname)));
        }
        check_attrs(ctx, child, &[(Space::Rdf, "resource")])?;
        reject_text(ctx, child)?;
        reject_children(ctx, child)?;
        let parent = reference(ctx, child)?;
        out.push(Declaration {
            decl: Decl::Subclass {
                child: class.clone(),
                parent,
            },
            source: ctx.source(child),
        });
    }
    Ok(())
}

fn property_decl(ctx: &Ctx<'_>, elem: &Elem) -> Result<Declaration, ParseError> {
    check_attrs(ctx, elem, &[(Space::Rdf, "ID")])?;
    reject_text(ctx, elem)?;
    let prop = rdf_id(ctx, elem)?;
    let mut domains = Vec::new();
    let mut ranges = Vec::new();
    for child in &elem.children {
        let list = match (&child.space, child.local.as_str()) {
            (Space::Rdfs, "domain") => &mut domains,
            (Space::Rdfs, "range") => &mut ranges,
            _ => return Err(ctx.unknown(child.start, format!("<{}> in rdf:Property", child.qname))),
        };
        check_attrs(ctx, child, &[(Space::Rdf, "resource")])?;
        reject_text(ctx, child)?;
        reject_children(ctx, child)?;
        list.push(reference(ctx, child)?);
    }
    Ok(Declaration {
        decl: Decl::Property {
            name: prop,
            domains,
            ranges,
        },
        source: ctx.source(elem),
    })
}

fn instance_decl(ctx: &Ctx<'_>, elem: &Elem) -> Result<Declaration, ParseError> {
    check_attrs(ctx, elem, &[(Space::Rdf, "ID")])?;
    reject_text(ctx, elem)?;
    let id = rdf_id(ctx, elem)?;
    let class = name(ctx, elem.start, &elem.local)?;
    let mut assertions = Vec::with_capacity(elem.children.len());
    for child in &elem.children {
        if child.space != Space::Vocab {
            return Err(ctx.unknown(child.start, format!("<{}> in instance {id}", child.qname)));
        }
        check_attrs(ctx, child, &[(Space::Rdf, "resource")])?;
        reject_children(ctx, child)?;
        let property = name(ctx, child.start, &child.local)?;
        let value = match attr(child, Space::Rdf, "resource") {
            Some(target) => {
                if !child.text.trim().is_empty() {
                    return Err(ParseError::BadReference {
                        at: ctx.at(child.start),
                        message: format!("<{}> has both rdf:resource and text", child.qname),
                    });
                }
                Value::Resource(fragment(ctx, child, target)?)
            }
            None => Value::Literal(child.text.trim().to_string()),
        };
        assertions.push(Assertion { property, value });
    }
    Ok(Declaration {
        decl: Decl::Instance {
            id,
            class,
            assertions,
        },
        source: ctx.source(elem),
    })
}
