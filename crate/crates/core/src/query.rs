//! Query answering: spot class and instance mentions in a query, relate
//! them through a property found by walking both ancestor chains, and
//! return the values together with an explanation of the walk.
//!
//! A query names one instance `I` and one class `C`. Forward resolution looks
//! for a property from `I`'s class chain to `C`'s chain and returns the
//! values `I` asserts for it ("season required for mango"). When that finds
//! nothing, inverse resolution looks for a property from `C`'s chain to
//! `I`'s class chain and lists the instances under `C` whose value for it is
//! `I` ("K123 required for which crops").

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::{Lexicon, MentionKind, MAX_PHRASE_WORDS};
use crate::name::Name;
use crate::ontology::{KnowledgeBase, LookupError, PropertyMatch};
use crate::rdf::Value;
use crate::tokenize::{is_stop_word, tokenize, INTERROGATIVES};

/// Half-open token range `[start, end)` within the tokenized query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mention {
    pub kind: MentionKind,
    pub name: Name,
    pub span: Span,
    /// Preceded by "which" or "what", with only stop words in between.
    pub questioned: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Extraction {
    /// Ordered by span start; spans never overlap.
    pub mentions: Vec<Mention>,
    /// Non-stop-word tokens that matched nothing.
    pub dropped: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Forward,
    Inverse,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Forward => "forward",
            Mode::Inverse => "inverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplanationTrace {
    pub domain_chain_used: Vec<Name>,
    pub range_chain_used: Vec<Name>,
    pub levels_walked: usize,
    pub matched_domain: Name,
    pub matched_range: Name,
}

/// Values found through one property. Inverse answers hold the matching
/// instances as resource values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultGroup {
    pub property: Name,
    pub results: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub mode: Mode,
    /// One group per property matched at the winning level, by property name.
    /// Never empty, and no group is empty.
    pub groups: Vec<ResultGroup>,
    pub trace: ExplanationTrace,
}

impl Answer {
    /// The (first) property that answered the query.
    pub fn property(&self) -> &Name {
        &self.groups[0].property
    }

    pub fn results(&self) -> impl Iterator<Item = &Value> {
        self.groups.iter().flat_map(|g| &g.results)
    }
}

/// Chains tried by one resolution mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub domain_chain: Vec<Name>,
    pub range_chain: Vec<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("malformed query: {reason}")]
    MalformedQuery { reason: String },
    #[error("no relation between {instance} and {class}: no property links their class chains")]
    NoRelation {
        instance: Name,
        class: Name,
        forward: Box<Attempt>,
        /// `None` when the query asked "which" of the instance.
        inverse: Option<Box<Attempt>>,
    },
    #[error("property {} relates {instance} and {class}, but no values match", join(.properties))]
    EmptyResult {
        mode: Mode,
        instance: Name,
        class: Name,
        properties: Vec<Name>,
        trace: Box<ExplanationTrace>,
    },
    #[error(transparent)]
    Unknown(#[from] LookupError),
}

impl QueryError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            QueryError::MalformedQuery { .. } => "malformed_query",
            QueryError::NoRelation { .. } => "no_relation",
            QueryError::EmptyResult { .. } => "empty_result",
            QueryError::Unknown(_) => "unknown_name",
        }
    }
}

fn join(names: &[Name]) -> String {
    names
        .iter()
        .map(Name::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Finds class and instance mentions, left to right.
///
/// At each token that is not a stop word the longest phrase (up to
/// [`MAX_PHRASE_WORDS`] tokens) known to the instance table is taken; failing
/// that, the longest phrase in the class table.
pub fn extract(lexicon: &Lexicon, query: &str) -> Extraction {
    let tokens = tokenize(query);
    let mut out = Extraction::default();
    let mut pos = 0;
    while pos < tokens.len() {
        if is_stop_word(&tokens[pos]) {
            pos += 1;
            continue;
        }
        let longest = |kind: MentionKind| {
            let table = lexicon.table(kind);
            let max = MAX_PHRASE_WORDS.min(tokens.len() - pos);
            (1..=max).rev().find_map(|len| {
                table
                    .lookup_tokens(&tokens[pos..pos + len])
                    .map(|name| Mention {
                        kind,
                        name: name.clone(),
                        span: Span {
                            start: pos,
                            end: pos + len,
                        },
                        questioned: questioned(&tokens[..pos]),
                    })
            })
        };
        match longest(MentionKind::Instance).or_else(|| longest(MentionKind::Class)) {
            Some(m) => {
                pos = m.span.end;
                out.mentions.push(m);
            }
            None => {
                out.dropped.push(tokens[pos].clone());
                pos += 1;
            }
        }
    }
    out
}

fn questioned(before: &[String]) -> bool {
    before
        .iter()
        .rev()
        .take_while(|t| is_stop_word(t))
        .any(|t| INTERROGATIVES.contains(&t.as_str()))
}

/// Relates the extraction's instance and class mentions through a property.
///
/// Forward resolution is tried first. Inverse resolution follows when it
/// finds no property or no values, unless the query asks "which" of the
/// instance itself (as in "crops required for which K123"): inverse answers
/// list members of the class, so they only fit questions about the class.
pub fn resolve(kb: &KnowledgeBase, extraction: &Extraction) -> Result<Answer, QueryError> {
    let (instance_mention, class) = pick_mentions(&extraction.mentions)?;
    let instance = &instance_mention.name;
    let instance_chain = kb.ancestors(kb.class_of(instance)?)?;
    let class_chain = kb.ancestors(class)?;

    let forward = kb.find_property(&instance_chain, &class_chain);
    let mut empty = None;
    if let Some(m) = &forward {
        let groups = collect_groups(m, |p| {
            Ok(kb.value_of(instance, p)?.into_iter().cloned().collect())
        })?;
        let trace = trace(m, &instance_chain, &class_chain);
        if !groups.is_empty() {
            return Ok(Answer {
                mode: Mode::Forward,
                groups,
                trace,
            });
        }
        empty = Some((Mode::Forward, property_names(m), trace));
    }

    let inverse_allowed = !instance_mention.questioned;
    let inverse = if inverse_allowed {
        kb.find_property(&class_chain, &instance_chain)
    } else {
        None
    };
    if let Some(m) = &inverse {
        let candidates = kb.subtree_instances(class)?;
        let groups = collect_groups(m, |p| {
            let mut hits = Vec::new();
            for x in &candidates {
                if kb.value_of(x, p)?.iter().any(|v| refers_to(v, instance)) {
                    hits.push(Value::Resource(x.clone()));
                }
            }
            Ok(hits)
        })?;
        let trace = trace(m, &class_chain, &instance_chain);
        if !groups.is_empty() {
            return Ok(Answer {
                mode: Mode::Inverse,
                groups,
                trace,
            });
        }
        empty.get_or_insert((Mode::Inverse, property_names(m), trace));
    }

    match empty {
        Some((mode, properties, trace)) => Err(QueryError::EmptyResult {
            mode,
            instance: instance.clone(),
            class: class.clone(),
            properties,
            trace: Box::new(trace),
        }),
        None => Err(QueryError::NoRelation {
            instance: instance.clone(),
            class: class.clone(),
            forward: Box::new(Attempt {
                domain_chain: instance_chain.clone(),
                range_chain: class_chain.clone(),
            }),
            inverse: inverse_allowed.then(|| {
                Box::new(Attempt {
                    domain_chain: class_chain,
                    range_chain: instance_chain,
                })
            }),
        }),
    }
}

/// `extract` followed by `resolve`.
pub fn answer_query(
    kb: &KnowledgeBase,
    lexicon: &Lexicon,
    query: &str,
) -> Result<Answer, QueryError> {
    resolve(kb, &extract(lexicon, query))
}

/// A resource value naming `instance`, or a literal spelling it.
fn refers_to(value: &Value, instance: &Name) -> bool {
    match value {
        Value::Resource(target) => target == instance,
        Value::Literal(text) => text.to_lowercase() == instance.folded(),
    }
}

fn pick_mentions(mentions: &[Mention]) -> Result<(&Mention, &Name), QueryError> {
    let describe = || {
        mentions
            .iter()
            .map(|m| format!("{} {}", m.kind, m.name))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let reason = match mentions {
        [] => "no class or instance name found".to_string(),
        [only] => format!(
            "found only {} {}; need one class and one instance",
            only.kind, only.name
        ),
        [a, b] if a.kind == b.kind => format!(
            "found two {} names ({}); need one class and one instance",
            a.kind,
            describe()
        ),
        [a, b] => {
            return Ok(match a.kind {
                MentionKind::Instance => (a, &b.name),
                MentionKind::Class => (b, &a.name),
            })
        }
        _ => format!(
            "found {} names ({}); need one class and one instance",
            mentions.len(),
            describe()
        ),
    };
    Err(QueryError::MalformedQuery { reason })
}

fn collect_groups(
    m: &PropertyMatch<'_>,
    mut values: impl FnMut(&Name) -> Result<Vec<Value>, LookupError>,
) -> Result<Vec<ResultGroup>, LookupError> {
    let mut groups = Vec::new();
    for prop in &m.properties {
        let results = values(&prop.name)?;
        if !results.is_empty() {
            groups.push(ResultGroup {
                property: prop.name.clone(),
                results,
            });
        }
    }
    Ok(groups)
}

fn property_names(m: &PropertyMatch<'_>) -> Vec<Name> {
    m.properties.iter().map(|p| p.name.clone()).collect()
}

fn trace(m: &PropertyMatch<'_>, domain_chain: &[Name], range_chain: &[Name]) -> ExplanationTrace {
    ExplanationTrace {
        domain_chain_used: domain_chain.to_vec(),
        range_chain_used: range_chain.to_vec(),
        levels_walked: m.domain_level + m.range_level,
        matched_domain: domain_chain[m.domain_level].clone(),
        matched_range: range_chain[m.range_level].clone(),
    }
}

/// JSON shape of a successful query, shared by the CLI and the HTTP API.
#[derive(Debug, Clone, Serialize)]
pub struct QueryResponse<'a> {
    pub query: &'a str,
    pub mode: Mode,
    pub property: &'a Name,
    /// All result values as display strings, group by group.
    pub results: Vec<&'a str>,
    pub groups: &'a [ResultGroup],
    pub mentions: &'a [Mention],
    pub trace: &'a ExplanationTrace,
}

impl<'a> QueryResponse<'a> {
    pub fn new(query: &'a str, extraction: &'a Extraction, answer: &'a Answer) -> Self {
        QueryResponse {
            query,
            mode: answer.mode,
            property: answer.property(),
            results: answer.results().map(Value::text).collect(),
            groups: &answer.groups,
            mentions: &extraction.mentions,
            trace: &answer.trace,
        }
    }
}
