use std::io::{self, Write};

use ontosearch_core::{Answer, Mode, Name, QueryError, SearchEngine};

pub fn summary(engine: &SearchEngine) -> String {
    let kb = engine.kb();
    format!(
        "ok, {} documents, {} classes, {} properties, {} instances",
        kb.doc_count(),
        kb.class_names().count(),
        kb.properties().count(),
        kb.instances().count()
    )
}

fn chain(names: &[Name]) -> String {
    names
        .iter()
        .map(Name::as_str)
        .collect::<Vec<_>>()
        .join(" > ")
}

pub fn answer(answer: &Answer, out: &mut impl Write) -> io::Result<()> {
    let multi = answer.groups.len() > 1;
    for group in &answer.groups {
        for value in &group.results {
            if multi {
                writeln!(out, "{}: {}", group.property, value.text())?;
            } else {
                writeln!(out, "{}", value.text())?;
            }
        }
    }
    let t = &answer.trace;
    let mode = match answer.mode {
        Mode::Forward => "forward",
        Mode::Inverse => "inverse",
    };
    let props: Vec<&str> = answer.groups.iter().map(|g| g.property.as_str()).collect();
    writeln!(out, "  mode:     {mode} via {}", props.join(", "))?;
    writeln!(out, "  domain:   {}", chain(&t.domain_chain_used))?;
    writeln!(out, "  range:    {}", chain(&t.range_chain_used))?;
    writeln!(
        out,
        "  matched:  {} / {} after {} level(s)",
        t.matched_domain, t.matched_range, t.levels_walked
    )
}

pub fn error_json(err: &QueryError) -> String {
    serde_json::json!({ "error": { "code": err.code(), "message": err.to_string() } }).to_string()
}
