#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ontosearch_core::ontology::KnowledgeBase;
use ontosearch_core::{Name, SearchEngine, Value};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn engine() -> SearchEngine {
    SearchEngine::load(fixture("crops")).expect("fixture KB loads")
}

pub fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

/// Membership of `class` in the subtree of `root`, by following parent links
/// one at a time.
pub fn is_under(kb: &KnowledgeBase, class: &Name, root: &Name) -> bool {
    let mut cur = Some(class);
    let mut steps = 0;
    while let Some(c) = cur {
        if c == root {
            return true;
        }
        steps += 1;
        assert!(steps < 1000, "parent loop");
        cur = kb.parent(c);
    }
    false
}

/// Instances under `class` whose `property` values name `target`, found by
/// scanning every assertion of every instance.
pub fn brute_inverse(
    kb: &KnowledgeBase,
    class: &Name,
    property: &Name,
    target: &Name,
) -> BTreeSet<Name> {
    kb.instances()
        .filter(|rec| is_under(kb, &rec.class, class))
        .filter(|rec| {
            rec.assertions.iter().any(|a| {
                a.property == *property
                    && match &a.value {
                        Value::Resource(t) => t == target,
                        Value::Literal(text) => {
                            text.to_lowercase() == target.as_str().to_lowercase()
                        }
                    }
            })
        })
        .map(|rec| rec.id.clone())
        .collect()
}

/// First matching (domain level, range level) pair and the properties
/// matching there, trying every pair of positions against every property.
pub fn brute_find(
    kb: &KnowledgeBase,
    domain_chain: &[Name],
    range_chain: &[Name],
) -> Option<(usize, usize, Vec<Name>)> {
    let mut hits = Vec::new();
    for (i, d) in domain_chain.iter().enumerate() {
        for (j, r) in range_chain.iter().enumerate() {
            for p in kb.properties() {
                if p.domains.contains(d) && p.ranges.contains(r) {
                    hits.push((i + j, j, i, p.name.clone()));
                }
            }
        }
    }
    hits.sort();
    let (total, j, i, _) = hits.first()?.clone();
    let props = hits
        .iter()
        .filter(|h| h.0 == total && h.1 == j)
        .map(|h| h.3.clone())
        .collect();
    Some((i, j, props))
}
