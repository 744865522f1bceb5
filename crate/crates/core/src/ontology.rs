//! Validated knowledge base: the class forest, property table and instance
//! assertions, plus the traversal primitives the query engine walks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::name::Name;
use crate::rdf::{Assertion, Decl, Declaration, Source, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyDef {
    pub name: Name,
    pub domains: BTreeSet<Name>,
    pub ranges: BTreeSet<Name>,
    #[serde(skip)]
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub id: Name,
    pub class: Name,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Class,
    Property,
    Instance,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Class => "class",
            NameKind::Property => "property",
            NameKind::Instance => "instance",
        })
    }
}

/// One validation failure found while assembling a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("subclass cycle: {}", join_path(.path))]
    Cycle { path: Vec<Name> },
    #[error("{at}: undefined {kind} {name} referenced by {by}")]
    UndefinedReference {
        name: Name,
        kind: NameKind,
        by: String,
        at: Source,
    },
    #[error("{at}: {name} is already declared as a {first_kind} at {first}")]
    DuplicateId {
        name: Name,
        first_kind: NameKind,
        first: Source,
        at: Source,
    },
    #[error("{at}: class {class} already has parent {existing}, cannot also extend {parent}")]
    MultipleParents {
        class: Name,
        existing: Name,
        parent: Name,
        at: Source,
    },
    #[error("{at}: {instance} is a {class}, outside every domain of property {property}")]
    DomainViolation {
        instance: Name,
        class: Name,
        property: Name,
        at: Source,
    },
}

fn join_path(path: &[Name]) -> String {
    path.iter()
        .map(Name::as_str)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// All validation failures of a rejected knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("knowledge base is invalid ({} error(s)):\n{}", .0.len(), render_errors(.0))]
pub struct BuildError(pub Vec<KbError>);

fn render_errors(errors: &[KbError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown class {0}")]
    UnknownClass(Name),
    #[error("unknown instance {0}")]
    UnknownInstance(Name),
    #[error("unknown property {0}")]
    UnknownProperty(Name),
}

/// Properties whose domain and range matched at one pair of chain positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyMatch<'kb> {
    /// Sorted by name; more than one entry means the KB is ambiguous here.
    pub properties: Vec<&'kb PropertyDef>,
    pub domain_level: usize,
    pub range_level: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    classes: BTreeMap<Name, Source>,
    parent_of: BTreeMap<Name, Name>,
    children: BTreeMap<Name, BTreeSet<Name>>,
    properties: BTreeMap<Name, PropertyDef>,
    instances: BTreeMap<Name, InstanceRecord>,
    members: BTreeMap<Name, BTreeSet<Name>>,
    doc_count: usize,
}

impl KnowledgeBase {
    /// Assembles and validates declarations.
    ///
    /// Declarations are processed in source order, so any permutation of the
    /// same list builds the same knowledge base. Every problem found is
    /// reported; nothing is built if there is at least one.
    pub fn build(decls: impl IntoIterator<Item = Declaration>) -> Result<Self, BuildError> {
        let mut decls: Vec<Declaration> = decls.into_iter().collect();
        decls.sort_by(|a, b| a.source.cmp(&b.source));

        let mut kb = KnowledgeBase {
            doc_count: decls
                .iter()
                .map(|d| d.source.doc_id.as_str())
                .collect::<BTreeSet<_>>()
                .len(),
            ..Default::default()
        };
        let mut errors = Vec::new();
        let mut links = Vec::new();

        for d in &decls {
            if let Decl::Class { name } = &d.decl {
                kb.classes
                    .entry(name.clone())
                    .or_insert_with(|| d.source.clone());
            }
        }
        for d in decls {
            match d.decl {
                Decl::Class { .. } => {}
                Decl::Subclass { child, parent } => links.push((child, parent, d.source)),
                Decl::Property {
                    name,
                    domains,
                    ranges,
                } => {
                    if let Some(e) = kb.clash(&name, &d.source) {
                        errors.push(e);
                        continue;
                    }
                    kb.properties.insert(
                        name.clone(),
                        PropertyDef {
                            name,
                            domains: domains.into_iter().collect(),
                            ranges: ranges.into_iter().collect(),
                            source: d.source,
                        },
                    );
                }
                Decl::Instance {
                    id,
                    class,
                    assertions,
                } => {
                    if let Some(e) = kb.clash(&id, &d.source) {
                        errors.push(e);
                        continue;
                    }
                    kb.instances.insert(
                        id.clone(),
                        InstanceRecord {
                            id,
                            class,
                            assertions,
                            source: d.source,
                        },
                    );
                }
            }
        }

        for (child, parent, at) in links {
            let mut ok = true;
            for (name, role) in [(&child, "subclass"), (&parent, "superclass")] {
                if !kb.classes.contains_key(name) {
                    ok = false;
                    errors.push(KbError::UndefinedReference {
                        name: name.clone(),
                        kind: NameKind::Class,
                        by: format!("subclass link {child} -> {parent} ({role})"),
                        at: at.clone(),
                    });
                }
            }
            if !ok {
                continue;
            }
            match kb.parent_of.get(&child) {
                Some(existing) if *existing == parent => {}
                Some(existing) => errors.push(KbError::MultipleParents {
                    class: child.clone(),
                    existing: existing.clone(),
                    parent,
                    at,
                }),
                None => {
                    kb.children
                        .entry(parent.clone())
                        .or_default()
                        .insert(child.clone());
                    kb.parent_of.insert(child, parent);
                }
            }
        }

        let cycles = kb.find_cycles();
        let acyclic = cycles.is_empty();
        errors.extend(cycles);

        for prop in kb.properties.values() {
            for (class, role) in prop
                .domains
                .iter()
                .map(|c| (c, "domain"))
                .chain(prop.ranges.iter().map(|c| (c, "range")))
            {
                if !kb.classes.contains_key(class) {
                    errors.push(KbError::UndefinedReference {
                        name: class.clone(),
                        kind: NameKind::Class,
                        by: format!("{role} of property {}", prop.name),
                        at: prop.source.clone(),
                    });
                }
            }
        }

        for rec in kb.instances.values() {
            if !kb.classes.contains_key(&rec.class) {
                errors.push(KbError::UndefinedReference {
                    name: rec.class.clone(),
                    kind: NameKind::Class,
                    by: format!("instance {}", rec.id),
                    at: rec.source.clone(),
                });
                continue;
            }
            for a in &rec.assertions {
                let Some(prop) = kb.properties.get(&a.property) else {
                    errors.push(KbError::UndefinedReference {
                        name: a.property.clone(),
                        kind: NameKind::Property,
                        by: format!("instance {}", rec.id),
                        at: rec.source.clone(),
                    });
                    continue;
                };
                if let Value::Resource(target) = &a.value {
                    if !kb.instances.contains_key(target) && !kb.classes.contains_key(target) {
                        errors.push(KbError::UndefinedReference {
                            name: target.clone(),
                            kind: NameKind::Instance,
                            by: format!("{}.{}", rec.id, a.property),
                            at: rec.source.clone(),
                        });
                    }
                }
                if acyclic && !prop.domains.is_empty() {
                    let chain = kb.chain(&rec.class);
                    if !chain.iter().any(|c| prop.domains.contains(c)) {
                        errors.push(KbError::DomainViolation {
                            instance: rec.id.clone(),
                            class: rec.class.clone(),
                            property: prop.name.clone(),
                            at: rec.source.clone(),
                        });
                    }
                }
            }
        }

        if !errors.is_empty() {
            return Err(BuildError(errors));
        }
        for rec in kb.instances.values() {
            kb.members
                .entry(rec.class.clone())
                .or_default()
                .insert(rec.id.clone());
        }
        Ok(kb)
    }

    /// Class, property and instance names share no spelling.
    fn clash(&self, name: &Name, at: &Source) -> Option<KbError> {
        let first = if let Some(src) = self.classes.get(name) {
            (NameKind::Class, src)
        } else if let Some(p) = self.properties.get(name) {
            (NameKind::Property, &p.source)
        } else {
            (NameKind::Instance, &self.instances.get(name)?.source)
        };
        Some(KbError::DuplicateId {
            name: name.clone(),
            first_kind: first.0,
            first: first.1.clone(),
            at: at.clone(),
        })
    }

    /// Each cycle once, rotated to start at its smallest name and closed by
    /// repeating it (`A -> B -> A`).
    fn find_cycles(&self) -> Vec<KbError> {
        let mut seen: BTreeSet<&Name> = BTreeSet::new();
        let mut cycles = Vec::new();
        for start in self.parent_of.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut path: Vec<&Name> = Vec::new();
            let mut cur = Some(start);
            while let Some(c) = cur {
                if let Some(pos) = path.iter().position(|p| *p == c) {
                    let mut cycle: Vec<Name> = path[pos..].iter().map(|n| (*n).clone()).collect();
                    let min = (0..cycle.len()).min_by_key(|&i| &cycle[i]).unwrap_or(0);
                    cycle.rotate_left(min);
                    cycle.push(cycle[0].clone());
                    cycles.push(KbError::Cycle { path: cycle });
                    break;
                }
                if seen.contains(c) {
                    break;
                }
                path.push(c);
                cur = self.parent_of.get(c);
            }
            seen.extend(path);
        }
        cycles
    }

    fn chain(&self, class: &Name) -> Vec<Name> {
        let mut out = vec![self.canonical_class(class)];
        let mut cur = class;
        while let Some(parent) = self.parent_of.get(cur) {
            if out.contains(parent) {
                break;
            }
            out.push(self.canonical_class(parent));
            cur = parent;
        }
        out
    }

    fn canonical_class(&self, class: &Name) -> Name {
        self.classes
            .get_key_value(class)
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| class.clone())
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn class_names(&self) -> impl Iterator<Item = &Name> {
        self.classes.keys()
    }

    /// The class as spelled in its declaration.
    pub fn class(&self, name: &Name) -> Option<&Name> {
        self.classes.get_key_value(name).map(|(k, _)| k)
    }

    pub fn has_class(&self, name: &Name) -> bool {
        self.classes.contains_key(name)
    }

    pub fn class_source(&self, name: &Name) -> Option<&Source> {
        self.classes.get(name)
    }

    pub fn parent(&self, class: &Name) -> Option<&Name> {
        self.parent_of.get(class)
    }

    /// Direct subclasses, ordered by name.
    pub fn children(&self, class: &Name) -> impl Iterator<Item = &Name> {
        self.children.get(class).into_iter().flatten()
    }

    /// Classes without a parent, ordered by name.
    pub fn roots(&self) -> impl Iterator<Item = &Name> {
        self.classes
            .keys()
            .filter(|c| !self.parent_of.contains_key(*c))
    }

    /// Instances declared directly with this class, ordered by name.
    pub fn direct_instances(&self, class: &Name) -> impl Iterator<Item = &Name> {
        self.members.get(class).into_iter().flatten()
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    pub fn property(&self, name: &Name) -> Option<&PropertyDef> {
        self.properties.get(name)
    }

    pub fn instances(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.instances.values()
    }

    pub fn instance(&self, name: &Name) -> Option<&InstanceRecord> {
        self.instances.get(name)
    }

    pub fn class_of(&self, instance: &Name) -> Result<&Name, LookupError> {
        self.instances
            .get(instance)
            .map(|rec| &rec.class)
            .ok_or_else(|| LookupError::UnknownInstance(instance.clone()))
    }

    /// `[class, parent, grandparent, ..., root]`.
    pub fn ancestors(&self, class: &Name) -> Result<Vec<Name>, LookupError> {
        if !self.classes.contains_key(class) {
            return Err(LookupError::UnknownClass(class.clone()));
        }
        Ok(self.chain(class))
    }

    /// Instances of `class` and of all its transitive subclasses: the class's
    /// own instances first, then each subclass depth-first in name order.
    pub fn subtree_instances(&self, class: &Name) -> Result<Vec<Name>, LookupError> {
        if !self.classes.contains_key(class) {
            return Err(LookupError::UnknownClass(class.clone()));
        }
        let mut out = Vec::new();
        let mut stack = vec![class];
        while let Some(c) = stack.pop() {
            out.extend(self.direct_instances(c).cloned());
            let kids: Vec<&Name> = self.children(c).collect();
            stack.extend(kids.into_iter().rev());
        }
        Ok(out)
    }

    /// Asserted values of `property` on `instance`, in assertion order.
    pub fn value_of(&self, instance: &Name, property: &Name) -> Result<Vec<&Value>, LookupError> {
        let rec = self
            .instances
            .get(instance)
            .ok_or_else(|| LookupError::UnknownInstance(instance.clone()))?;
        if !self.properties.contains_key(property) {
            return Err(LookupError::UnknownProperty(property.clone()));
        }
        Ok(rec
            .assertions
            .iter()
            .filter(|a| a.property == *property)
            .map(|a| &a.value)
            .collect())
    }

    /// Finds the properties relating a domain-side class chain to a
    /// range-side class chain.
    ///
    /// Position pairs are tried by increasing total level. Within one total
    /// the domain side is walked first: `(k, 0)`, then `(k - 1, 1)`, down to
    /// `(0, k)`. The first pair with any property whose domains contain the
    /// domain-side class and whose ranges contain the range-side class wins;
    /// every property matching at that pair is returned.
    pub fn find_property(
        &self,
        domain_chain: &[Name],
        range_chain: &[Name],
    ) -> Option<PropertyMatch<'_>> {
        if domain_chain.is_empty() || range_chain.is_empty() {
            return None;
        }
        let max_total = domain_chain.len() + range_chain.len() - 2;
        for total in 0..=max_total {
            let lo = total.saturating_sub(range_chain.len() - 1);
            let hi = total.min(domain_chain.len() - 1);
            for domain_level in (lo..=hi).rev() {
                let range_level = total - domain_level;
                let d = &domain_chain[domain_level];
                let r = &range_chain[range_level];
                let properties: Vec<&PropertyDef> = self
                    .properties
                    .values()
                    .filter(|p| p.domains.contains(d) && p.ranges.contains(r))
                    .collect();
                if !properties.is_empty() {
                    return Some(PropertyMatch {
                        properties,
                        domain_level,
                        range_level,
                    });
                }
            }
        }
        None
    }
}
