mod common;

use std::collections::BTreeSet;

use common::{brute_find, brute_inverse, engine, n};
use ontosearch_core::lexicon::MentionKind;
use ontosearch_core::ontology::KnowledgeBase;
use ontosearch_core::query::{Mention, Span};
use ontosearch_core::rdf::{Assertion, Decl, Declaration, Source};
use ontosearch_core::{answer_query, resolve, Extraction, Lexicon, Mode, Name, QueryError, Value};
use proptest::prelude::*;

fn texts(a: &ontosearch_core::Answer) -> Vec<String> {
    a.results().map(|v| v.text().to_string()).collect()
}

#[test]
fn soil_required_for_potato() {
    let e = engine();
    let a = e.answer("soil required for potato").unwrap();
    assert_eq!(a.mode, Mode::Forward);
    assert_eq!(a.property(), &n("soilreq"));
    assert_eq!(texts(&a), ["KR256"]);
    assert_eq!(a.trace.levels_walked, 0);
    assert_eq!(a.trace.matched_domain, n("Vegetable"));
    assert_eq!(a.trace.matched_range, n("Soil"));
}

#[test]
fn season_required_for_mango_walks_up() {
    let e = engine();
    let a = e.answer("season required for mango").unwrap();
    assert_eq!(a.mode, Mode::Forward);
    assert_eq!(a.property(), &n("seasonreqd"));
    assert_eq!(texts(&a), ["summer"]);
    assert_eq!(a.trace.domain_chain_used, vec![n("Fruits"), n("Crops")]);
    assert_eq!(
        a.trace.range_chain_used,
        vec![n("season"), n("GeneralInfo")]
    );
    assert_eq!(a.trace.matched_domain, n("Crops"));
    assert_eq!(a.trace.levels_walked, 1);
}

#[test]
fn fertilizer_required_for_mango() {
    let e = engine();
    for q in [
        "fertilizer required for mango",
        "Fertilizers required for mango",
    ] {
        let a = e.answer(q).unwrap();
        assert_eq!(texts(&a), ["K123"], "{q}");
        assert_eq!(a.property(), &n("fertilizerreqd"));
    }
}

#[test]
fn synonyms_reach_the_same_answers() {
    let e = engine();
    assert_eq!(
        texts(&e.answer("market location of paddy").unwrap()),
        ["Bardhaman"]
    );
    assert_eq!(texts(&e.answer("price of aam").unwrap()), ["Rs 40 per kg"]);
    assert_eq!(texts(&e.answer("soil type for aloo").unwrap()), ["KR256"]);
}

#[test]
fn k123_required_for_which_crops() {
    let e = engine();
    let a = e.answer("K123 required for which crops?").unwrap();
    assert_eq!(a.mode, Mode::Inverse);
    assert_eq!(a.property(), &n("fertilizerreqd"));
    let got: BTreeSet<String> = texts(&a).into_iter().collect();
    let expected = brute_inverse(e.kb(), &n("Crops"), &n("fertilizerreqd"), &n("K123"));
    assert_eq!(got, expected.iter().map(|x| x.to_string()).collect());
    assert_eq!(
        got,
        ["mango".to_string(), "potato".to_string()]
            .into_iter()
            .collect()
    );
}

#[test]
fn inverse_through_a_literal_value() {
    let e = engine();
    let a = e.answer("KR256 required for which vegetables").unwrap();
    assert_eq!(a.mode, Mode::Inverse);
    assert_eq!(texts(&a), ["potato"]);
}

#[test]
fn crops_required_for_which_k123_has_no_relation() {
    let e = engine();
    let err = e.answer("crops required for which K123").unwrap_err();
    assert!(matches!(err, QueryError::NoRelation { .. }), "{err:?}");
    assert_eq!(err.code(), "no_relation");
}

#[test]
fn malformed_queries() {
    let e = engine();
    for q in [
        "hello world",
        "",
        "mango",
        "mango rice season",
        "crops fruits",
    ] {
        assert_eq!(e.answer(q).unwrap_err().code(), "malformed_query", "{q:?}");
    }
}

#[test]
fn empty_result() {
    let e = engine();
    // soilreq applies to vegetables only; no crop asserts summer as its soil
    let err = e.answer("soil for mango").unwrap_err();
    assert_eq!(err.code(), "no_relation");
    let err = e.answer("summer for which vegetable").unwrap_err();
    assert_eq!(err.code(), "empty_result", "{err}");
}

#[test]
fn mention_order_and_repetition() {
    let e = engine();
    let a = e.answer("season required for mango").unwrap();
    assert_eq!(e.answer("mango season").unwrap(), a);
    for _ in 0..5 {
        assert_eq!(e.answer("season required for mango").unwrap(), a);
    }
}

/// Expected outcome of resolving (instance, class), computed from brute-force
/// property search and assertion scans.
#[derive(Debug, PartialEq)]
enum Expected {
    Forward(Vec<(Name, Vec<Value>)>),
    Inverse(Vec<(Name, BTreeSet<Name>)>),
    Empty,
    NoRelation,
}

fn oracle(kb: &KnowledgeBase, instance: &Name, class: &Name) -> Expected {
    let ic = kb.ancestors(kb.class_of(instance).unwrap()).unwrap();
    let cc = kb.ancestors(class).unwrap();
    let mut found_any = false;
    if let Some((_, _, props)) = brute_find(kb, &ic, &cc) {
        found_any = true;
        let rec = kb.instance(instance).unwrap();
        let groups: Vec<(Name, Vec<Value>)> = props
            .into_iter()
            .map(|p| {
                let vals = rec
                    .assertions
                    .iter()
                    .filter(|a| a.property == p)
                    .map(|a| a.value.clone())
                    .collect::<Vec<_>>();
                (p, vals)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        if !groups.is_empty() {
            return Expected::Forward(groups);
        }
    }
    if let Some((_, _, props)) = brute_find(kb, &cc, &ic) {
        found_any = true;
        let groups: Vec<(Name, BTreeSet<Name>)> = props
            .into_iter()
            .map(|p| {
                let hits = brute_inverse(kb, class, &p, instance);
                (p, hits)
            })
            .filter(|(_, h)| !h.is_empty())
            .collect();
        if !groups.is_empty() {
            return Expected::Inverse(groups);
        }
    }
    if found_any {
        Expected::Empty
    } else {
        Expected::NoRelation
    }
}

fn observed(r: Result<ontosearch_core::Answer, QueryError>) -> Expected {
    match r {
        Ok(a) if a.mode == Mode::Forward => Expected::Forward(
            a.groups
                .into_iter()
                .map(|g| (g.property, g.results))
                .collect(),
        ),
        Ok(a) => Expected::Inverse(
            a.groups
                .into_iter()
                .map(|g| {
                    let set = g
                        .results
                        .into_iter()
                        .map(|v| match v {
                            Value::Resource(x) => x,
                            other => panic!("inverse result {other:?}"),
                        })
                        .collect();
                    (g.property, set)
                })
                .collect(),
        ),
        Err(QueryError::EmptyResult { .. }) => Expected::Empty,
        Err(QueryError::NoRelation { .. }) => Expected::NoRelation,
        Err(other) => panic!("{other}"),
    }
}

fn pair(instance: &Name, class: &Name) -> Extraction {
    Extraction {
        mentions: vec![
            Mention {
                kind: MentionKind::Instance,
                name: instance.clone(),
                span: Span { start: 0, end: 1 },
                questioned: false,
            },
            Mention {
                kind: MentionKind::Class,
                name: class.clone(),
                span: Span { start: 4, end: 5 },
                questioned: true,
            },
        ],
        dropped: vec![],
    }
}

#[test]
fn resolution_matches_brute_force_for_every_pair() {
    let e = engine();
    let kb = e.kb();
    let mut inverse_pairs = 0;
    let mut pairs = 0;
    for rec in kb.instances() {
        for class in kb.class_names() {
            pairs += 1;
            let expected = oracle(kb, &rec.id, class);
            if matches!(expected, Expected::Inverse(_)) {
                inverse_pairs += 1;
            }
            assert_eq!(
                observed(resolve(kb, &pair(&rec.id, class))),
                expected,
                "{} / {class}",
                rec.id
            );
            // same pair through the query text
            let q = format!("{} required for which {}", rec.id, class);
            assert_eq!(observed(e.answer(&q)), expected, "{q}");
        }
    }
    assert_eq!(pairs, 12 * 10);
    assert!(inverse_pairs >= 4, "{inverse_pairs}");
}

fn src(i: usize) -> Source {
    Source {
        doc_id: "gen".into(),
        start: i,
        end: i,
        start_line: 1,
        end_line: 1,
    }
}

/// A chain of classes `C0 <- C1 <- ... <- Cdepth` with a sibling `X<k>` under
/// each, one range class `Target`, one property `p` whose domain is `C<domain>`,
/// and instance `item` of class `C<depth>` asserting `values` for `p`.
fn lift_kb(depth: usize, domain: usize, values: &[String]) -> KnowledgeBase {
    let mut decls = vec![Decl::Class { name: n("Target") }];
    for k in 0..=depth {
        decls.push(Decl::Class {
            name: n(&format!("C{k}")),
        });
        decls.push(Decl::Class {
            name: n(&format!("X{k}")),
        });
        decls.push(Decl::Subclass {
            child: n(&format!("X{k}")),
            parent: n(&format!("C{k}")),
        });
        if k > 0 {
            decls.push(Decl::Subclass {
                child: n(&format!("C{k}")),
                parent: n(&format!("C{}", k - 1)),
            });
        }
    }
    decls.push(Decl::Property {
        name: n("p"),
        domains: vec![n(&format!("C{domain}"))],
        ranges: vec![n("Target")],
    });
    decls.push(Decl::Instance {
        id: n("item"),
        class: n(&format!("C{depth}")),
        assertions: values
            .iter()
            .map(|v| Assertion {
                property: n("p"),
                value: Value::Literal(v.clone()),
            })
            .collect(),
    });
    KnowledgeBase::build(decls.into_iter().enumerate().map(|(i, decl)| Declaration {
        decl,
        source: src(i),
    }))
    .unwrap()
}

proptest! {
    #[test]
    fn superclass_lift_keeps_forward_answers(
        depth in 0usize..6,
        lift in 0usize..6,
        values in prop::collection::vec("[a-z]{1,6}", 1..4),
    ) {
        let lift = lift.min(depth);
        let at_own_class = lift_kb(depth, depth, &values);
        let lifted = lift_kb(depth, depth - lift, &values);
        let q = "target for item";
        let a = answer_query(&at_own_class, &Lexicon::build(&at_own_class, &[]).unwrap(), q).unwrap();
        let b = answer_query(&lifted, &Lexicon::build(&lifted, &[]).unwrap(), q).unwrap();
        prop_assert_eq!(a.mode, Mode::Forward);
        prop_assert_eq!(&a.groups, &b.groups);
        prop_assert_eq!(texts(&b), values);
        prop_assert_eq!(a.trace.levels_walked, 0);
        prop_assert_eq!(b.trace.levels_walked, lift);
    }

    #[test]
    fn answering_is_total(q in "\\PC{0,80}") {
        let e = engine();
        match e.answer(&q) {
            Ok(a) => prop_assert!(a.results().next().is_some()),
            Err(err) => prop_assert!(!err.code().is_empty()),
        }
    }

    #[test]
    fn answering_vocabulary_soup_is_total_and_deterministic(
        words in prop::collection::vec(
            prop::sample::select(vec![
                "mango", "rice", "potato", "K123", "KR256", "crops", "season", "soil",
                "which", "for", "required", "fruit", "market", "location", "what", "?", "paddy",
            ]),
            0..7,
        )
    ) {
        let e = engine();
        let q = words.join(" ");
        let first = e.answer(&q);
        prop_assert_eq!(&e.answer(&q), &first);
        let ex = e.extract(&q);
        for w in ex.mentions.windows(2) {
            prop_assert!(w[0].span.end <= w[1].span.start);
        }
        if let Ok(a) = first {
            prop_assert!(a.trace.domain_chain_used.contains(&a.trace.matched_domain));
            prop_assert!(a.trace.range_chain_used.contains(&a.trace.matched_range));
            prop_assert!(a.groups.iter().all(|g| !g.results.is_empty()));
        }
    }
}
