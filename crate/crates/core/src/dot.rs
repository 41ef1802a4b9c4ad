//! Graphviz rendering: nested clusters per thimac, solid flows, dashed
//! triggers, double-bordered objects.

use std::fmt::Write;

use crate::model::{Action, ArcKind, StageRef, StaticModel, ThimacId};

pub fn export_dot(model: &StaticModel) -> String {
    let mut out = String::from("digraph tm {\n");
    if !model.thimacs().is_empty() {
        out.push_str("  compound=true;\n  node [shape=box, style=rounded];\n");
    }
    for root in model.roots() {
        cluster(model, root, 1, &mut out);
    }
    for arc in model.arcs() {
        let style = match arc.kind {
            ArcKind::Flow => "",
            ArcKind::Trigger => " [style=dashed]",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\"{style};",
            model.stage_path(arc.src),
            model.stage_path(arc.dst)
        );
    }
    out.push_str("}\n");
    out
}

/// The create stage is drawn only when declared or touched by an arc or an
/// injection; the thimac box itself implies it otherwise.
fn shows_create(model: &StaticModel, id: ThimacId) -> bool {
    let create = StageRef::new(id, Action::Create);
    model.thimac(id).stages.contains(&Action::Create)
        || model.arcs().iter().any(|a| a.src == create || a.dst == create)
        || model
            .scenarios()
            .iter()
            .flat_map(|s| &s.injections)
            .any(|i| i.destination == create)
}

fn cluster(model: &StaticModel, id: ThimacId, depth: usize, out: &mut String) {
    let t = model.thimac(id);
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}subgraph cluster_{} {{", id.0);
    let _ = writeln!(out, "{pad}  label=\"{}\";", t.name);
    if t.is_object() {
        let _ = writeln!(out, "{pad}  peripheries=2;");
    }
    let mut actions: Vec<Action> = Vec::new();
    if shows_create(model, id) {
        actions.push(Action::Create);
    }
    actions.extend(t.stages.iter().filter(|&&a| a != Action::Create));
    for action in actions {
        let _ = writeln!(
            out,
            "{pad}  \"{}\" [label=\"{action}\"];",
            model.stage_path(StageRef::new(id, action))
        );
    }
    for &child in &t.children {
        cluster(model, child, depth + 1, out);
    }
    let _ = writeln!(out, "{pad}}}");
}
