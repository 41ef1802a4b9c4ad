use std::fmt::Write;

use crate::model::{BehaviorGraph, RegionElement, StaticModel, ThimacId};

/// Canonical text: declaration order, two-space indents, one declaration per
/// line, sections (thimacs, arcs, events, behaviors, scenarios) separated by a
/// blank line. The empty model serializes to the empty string.
pub fn serialize(model: &StaticModel) -> String {
    let mut sections: Vec<String> = Vec::new();

    let mut thimacs = String::new();
    for root in model.roots() {
        write_thimac(model, root, 0, &mut thimacs);
    }
    sections.push(thimacs);

    let mut arcs = String::new();
    for arc in model.arcs() {
        let _ = writeln!(arcs, "{} {}", arc.kind.keyword(), model.arc_label(arc.id));
    }
    sections.push(arcs);

    let mut events = String::new();
    for event in model.events() {
        let items: Vec<String> = event
            .region
            .iter()
            .map(|&e| match e {
                RegionElement::Stage(s) => model.stage_path(s),
                RegionElement::Arc(a) => model.arc_label(a),
            })
            .collect();
        let _ = writeln!(events, "event {} {{ region: {} }}", event.name, items.join(", "));
    }
    sections.push(events);

    let mut behaviors = String::new();
    for b in model.behaviors() {
        let _ = writeln!(behaviors, "behavior {} {{ {} }}", b.name, chains(b).join(", "));
    }
    sections.push(behaviors);

    let mut scenarios = String::new();
    for s in model.scenarios() {
        if s.injections.is_empty() {
            let _ = writeln!(scenarios, "scenario {} {{}}", s.name);
            continue;
        }
        let _ = writeln!(scenarios, "scenario {} {{", s.name);
        for inj in &s.injections {
            let _ = writeln!(
                scenarios,
                "  inject {} at {} step {}",
                quote(&inj.payload),
                model.stage_path(inj.destination),
                inj.step
            );
        }
        scenarios.push_str("}\n");
    }
    sections.push(scenarios);

    sections.retain(|s| !s.is_empty());
    sections.join("\n")
}

fn write_thimac(model: &StaticModel, id: ThimacId, depth: usize, out: &mut String) {
    let t = model.thimac(id);
    let indent = "  ".repeat(depth);
    if t.stages.is_empty() && t.children.is_empty() {
        let _ = writeln!(out, "{indent}{} {} {{}}", t.kind.keyword(), t.name);
        return;
    }
    let _ = writeln!(out, "{indent}{} {} {{", t.kind.keyword(), t.name);
    for action in &t.stages {
        let _ = writeln!(out, "{indent}  stage {action}");
    }
    for &child in &t.children {
        write_thimac(model, child, depth + 1, out);
    }
    let _ = writeln!(out, "{indent}}}");
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Edges merged into maximal consecutive chains. Node order is recovered on
/// re-parse from first mention, so when the chains alone would not reproduce
/// it the node list is written out first.
fn chains(b: &BehaviorGraph) -> Vec<String> {
    let mut chains: Vec<Vec<&str>> = Vec::new();
    for (from, to) in &b.edges {
        match chains.last_mut() {
            Some(chain) if chain.last() == Some(&from.as_str()) => chain.push(to),
            _ => chains.push(vec![from, to]),
        }
    }
    let mut mentioned: Vec<&str> = Vec::new();
    for name in chains.iter().flatten() {
        if !mentioned.contains(name) {
            mentioned.push(name);
        }
    }
    let isolated: Vec<&str> = b
        .nodes
        .iter()
        .map(String::as_str)
        .filter(|n| !mentioned.contains(n))
        .collect();
    mentioned.extend(&isolated);
    let mut out: Vec<String> = Vec::new();
    if mentioned.iter().copied().eq(b.nodes.iter().map(String::as_str)) {
        out.extend(chains.iter().map(|c| c.join(" -> ")));
        out.extend(isolated.iter().map(|n| n.to_string()));
    } else {
        out.extend(b.nodes.iter().cloned());
        out.extend(chains.iter().map(|c| c.join(" -> ")));
    }
    out
}
