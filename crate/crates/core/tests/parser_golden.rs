use ontosearch_core::name::Name;
use ontosearch_core::rdf::{
    parse_document, write_document, Assertion, Decl, Declaration, Source, Value,
};
use proptest::prelude::*;

fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

fn kinds(decls: &[Declaration]) -> Vec<Decl> {
    decls.iter().map(|d| d.decl.clone()).collect()
}

const POTATO: &str = include_str!("../../../fixtures/snippets/potato.rdf");
const CLASSES: &str = include_str!("../../../fixtures/snippets/classes.rdf");
const PROPERTY: &str = include_str!("../../../fixtures/snippets/property.rdf");
const EMPTY: &str = include_str!("../../../fixtures/snippets/empty.rdf");

fn golden() -> Vec<(&'static str, &'static str, Vec<Decl>)> {
    vec![
        (
            "potato",
            POTATO,
            vec![Decl::Instance {
                id: n("potato"),
                class: n("vegetable"),
                assertions: vec![Assertion {
                    property: n("soilreq"),
                    value: Value::Literal("KR256".into()),
                }],
            }],
        ),
        (
            "classes",
            CLASSES,
            vec![
                Decl::Class {
                    name: n("Vegetable"),
                },
                Decl::Subclass {
                    child: n("Vegetable"),
                    parent: n("Crops"),
                },
                Decl::Class { name: n("Fruits") },
                Decl::Subclass {
                    child: n("Fruits"),
                    parent: n("Crops"),
                },
            ],
        ),
        (
            "property",
            PROPERTY,
            vec![Decl::Property {
                name: n("seasonreqd"),
                domains: vec![n("Vegetable")],
                ranges: vec![n("season")],
            }],
        ),
        ("empty", EMPTY, vec![]),
    ]
}

#[test]
fn snippets_parse_to_expected_declarations() {
    for (label, text, expected) in golden() {
        let decls = parse_document(text, label).unwrap_or_else(|e| panic!("{label}: {e}"));
        assert_eq!(kinds(&decls), expected, "{label}");
        for d in &decls {
            assert_eq!(d.source.doc_id, label);
            assert!(
                d.source.start < d.source.end && d.source.end <= text.len(),
                "{label}"
            );
        }
    }
}

#[test]
fn snippet_spellings_are_kept() {
    let decls = parse_document(POTATO, "p").unwrap();
    let Decl::Instance { class, .. } = &decls[0].decl else {
        panic!("not an instance");
    };
    assert_eq!(class.as_str(), "vegetable");
    assert_eq!(*class, n("Vegetable"));
}

#[test]
fn snippets_round_trip() {
    for (label, text, _) in golden() {
        let decls = parse_document(text, label).unwrap();
        let written = write_document(&decls).unwrap();
        let again = parse_document(&written, label).unwrap();
        assert_eq!(kinds(&again), kinds(&decls), "{label}:\n{written}");
    }
}

#[test]
fn instance_document_line_span() {
    let decls = parse_document(POTATO, "p").unwrap();
    assert_eq!(decls[0].source.start_line, 2);
    assert_eq!(decls[0].source.end_line, 7);
}

fn name_strategy() -> impl Strategy<Value = Name> {
    "[A-Za-z][A-Za-z0-9_-]{0,8}".prop_map(|s| Name::new(s).unwrap())
}

fn value_strategy() -> impl Strategy<Value = Value> {
    prop_oneof![
        "[A-Za-z0-9 <>&'\"]{0,12}".prop_map(|s| Value::Literal(s.trim().to_string())),
        name_strategy().prop_map(Value::Resource),
    ]
}

fn source() -> Source {
    Source {
        doc_id: "gen".into(),
        start: 0,
        end: 0,
        start_line: 1,
        end_line: 1,
    }
}

/// Declaration lists shaped like parser output: subclass links directly
/// follow the class they belong to.
fn schema_decls() -> impl Strategy<Value = Vec<Decl>> {
    let class = (
        name_strategy(),
        prop::collection::vec(name_strategy(), 0..3),
    )
        .prop_map(|(c, parents)| {
            let mut out = vec![Decl::Class { name: c.clone() }];
            out.extend(parents.into_iter().map(|p| Decl::Subclass {
                child: c.clone(),
                parent: p,
            }));
            out
        });
    let property = (
        name_strategy(),
        prop::collection::vec(name_strategy(), 0..3),
        prop::collection::vec(name_strategy(), 0..3),
    )
        .prop_map(|(name, domains, ranges)| {
            vec![Decl::Property {
                name,
                domains,
                ranges,
            }]
        });
    let instance = (
        name_strategy(),
        name_strategy(),
        prop::collection::vec((name_strategy(), value_strategy()), 0..4),
    )
        .prop_map(|(id, class, a)| {
            vec![Decl::Instance {
                id,
                class,
                assertions: a
                    .into_iter()
                    .map(|(property, value)| Assertion { property, value })
                    .collect(),
            }]
        });
    prop::collection::vec(prop_oneof![class, property, instance], 0..8)
        .prop_map(|groups| groups.into_iter().flatten().collect())
}

fn wrap(decls: &[Decl]) -> Vec<Declaration> {
    decls
        .iter()
        .map(|decl| Declaration {
            decl: decl.clone(),
            source: source(),
        })
        .collect()
}

fn body(doc: &str) -> &str {
    let start = doc.find("-schema#\">").unwrap() + "-schema#\">".len();
    let end = doc.rfind("</rdf:RDF>").unwrap();
    &doc[start..end]
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(decls in schema_decls()) {
        let text = write_document(&wrap(&decls)).unwrap();
        let parsed = parse_document(&text, "gen").unwrap();
        prop_assert_eq!(kinds(&parsed), decls);
        for d in &parsed {
            prop_assert!(d.source.end <= text.len());
            prop_assert!(text[d.source.start..d.source.end].starts_with('<'));
            prop_assert!(text[d.source.start..d.source.end].ends_with('>'));
        }
    }

    #[test]
    fn concatenated_bodies_parse_to_concatenated_lists(a in schema_decls(), b in schema_decls()) {
        let doc_a = write_document(&wrap(&a)).unwrap();
        let doc_b = write_document(&wrap(&b)).unwrap();
        let joined = format!(
            "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\" xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\">{}{}</rdf:RDF>",
            body(&doc_a),
            body(&doc_b)
        );
        let parsed = parse_document(&joined, "joined").unwrap();
        let mut expected = kinds(&parse_document(&doc_a, "a").unwrap());
        expected.extend(kinds(&parse_document(&doc_b, "b").unwrap()));
        prop_assert_eq!(kinds(&parsed), expected);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_document(&text, "junk");
    }
}
