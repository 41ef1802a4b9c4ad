//! Event occurrences over traces, derived behavior graphs and conformance of
//! declared behaviors.
//!
//! A stage fires at a step when a token moves into it or a create or process
//! record names it; an arc fires when a move or trigger record names it. An
//! event occurs at the earliest step by which every element of its region has
//! fired since its previous occurrence; elements firing at an occurrence step
//! are consumed by that occurrence.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{BehaviorGraph, Event, RegionElement, StaticModel};
use crate::sim::{RecordKind, RecordSubject, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("event `{event}` refers to a stage or arc outside the model")]
    UnresolvedElement { event: String },
    #[error("behavior `{behavior}` names unknown event `{event}`")]
    UnknownEvent { behavior: String, event: String },
}

/// Occurrence steps per event, in event order. Steps strictly increase.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccurrenceTable {
    pub entries: Vec<(String, Vec<u32>)>,
}

impl OccurrenceTable {
    pub fn steps(&self, event: &str) -> Option<&[u32]> {
        self.entries
            .iter()
            .find(|(name, _)| name == event)
            .map(|(_, steps)| steps.as_slice())
    }

    pub fn first(&self, event: &str) -> Option<u32> {
        self.steps(event).and_then(|s| s.first().copied())
    }

    pub fn count(&self, event: &str) -> usize {
        self.steps(event).map_or(0, <[u32]>::len)
    }

    /// `EVENT<TAB>s1,s2,...` per event; the step list is empty when the event
    /// never occurs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, steps) in &self.entries {
            let steps: Vec<String> = steps.iter().map(u32::to_string).collect();
            out.push_str(&format!("{name}\t{}\n", steps.join(",")));
        }
        out
    }
}

/// Region elements fired at each step of the trace, in step order.
pub fn firings_by_step(trace: &Trace, model: &StaticModel) -> Vec<(u32, BTreeSet<RegionElement>)> {
    let mut out: Vec<(u32, BTreeSet<RegionElement>)> = Vec::new();
    for record in &trace.records {
        let mut fired = Vec::with_capacity(2);
        match (record.kind, record.subject) {
            (RecordKind::Move, Some(RecordSubject::Arc(a))) => {
                fired.push(RegionElement::Arc(a));
                fired.push(RegionElement::Stage(model.arc(a).dst));
            }
            (RecordKind::Trigger, Some(RecordSubject::Arc(a))) => fired.push(RegionElement::Arc(a)),
            (RecordKind::Create | RecordKind::Process, Some(RecordSubject::Stage(s))) => {
                fired.push(RegionElement::Stage(s))
            }
            _ => {}
        }
        if fired.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some((step, set)) if *step == record.step => set.extend(fired),
            _ => out.push((record.step, fired.into_iter().collect())),
        }
    }
    out
}

fn resolves(model: &StaticModel, element: RegionElement) -> bool {
    match element {
        RegionElement::Stage(s) => model.has_stage(s),
        RegionElement::Arc(a) => a.0 < model.arcs().len(),
    }
}

pub fn occurrences(
    model: &StaticModel,
    trace: &Trace,
    events: &[Event],
) -> Result<OccurrenceTable, EventError> {
    for event in events {
        if !event.region.iter().all(|&e| resolves(model, e)) {
            return Err(EventError::UnresolvedElement {
                event: event.name.clone(),
            });
        }
    }
    let by_step = firings_by_step(trace, model);
    let entries = events
        .iter()
        .map(|event| {
            let mut seen: BTreeSet<RegionElement> = BTreeSet::new();
            let mut steps = Vec::new();
            for (step, fired) in &by_step {
                seen.extend(fired.iter().filter(|e| event.region.contains(e)));
                if !event.region.is_empty() && seen.len() == event.region.len() {
                    steps.push(*step);
                    seen.clear();
                }
            }
            (event.name.clone(), steps)
        })
        .collect();
    Ok(OccurrenceTable { entries })
}

/// Chain over the events that occur, ordered by first occurrence (ties by
/// table order), plus a self-loop on every event that occurs more than once.
pub fn derive_behavior(table: &OccurrenceTable) -> BehaviorGraph {
    let mut order: Vec<(u32, usize, &str, usize)> = table
        .entries
        .iter()
        .enumerate()
        .filter_map(|(i, (name, steps))| steps.first().map(|&f| (f, i, name.as_str(), steps.len())))
        .collect();
    order.sort();
    let mut graph = BehaviorGraph::new("derived");
    let mut prev: Option<&str> = None;
    for (_, _, name, count) in order {
        graph.add_node(name);
        if let Some(p) = prev {
            graph.add_edge(p, name);
        }
        if count > 1 {
            graph.add_edge(name, name);
        }
        prev = Some(name);
    }
    graph
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeViolation {
    pub from: String,
    pub to: String,
    pub reason: String,
}

/// Declared edges the run contradicts, in declaration order. Empty means the
/// run conforms.
pub fn check_behavior(
    declared: &BehaviorGraph,
    table: &OccurrenceTable,
) -> Result<Vec<EdgeViolation>, EventError> {
    if let Some(unknown) = declared.nodes.iter().find(|n| table.steps(n).is_none()) {
        return Err(EventError::UnknownEvent {
            behavior: declared.name.clone(),
            event: unknown.clone(),
        });
    }
    let mut violations = Vec::new();
    for (from, to) in &declared.edges {
        let reason = if from == to {
            let n = table.count(from);
            (n < 2).then(|| format!("`{from}` occurs {n} time(s); repetition needs at least 2"))
        } else {
            match (table.first(from), table.first(to)) {
                (Some(f), Some(t)) if f > t => Some(format!(
                    "`{from}` first occurs at step {f}, after `{to}` at step {t}"
                )),
                (Some(f), None) => Some(format!(
                    "`{from}` occurs at step {f} but `{to}` never occurs"
                )),
                _ => None,
            }
        };
        if let Some(reason) = reason {
            violations.push(EdgeViolation {
                from: from.clone(),
                to: to.clone(),
                reason,
            });
        }
    }
    Ok(violations)
}

/// One `A -> B` line per edge, then one line per node without edges.
pub fn behavior_to_text(graph: &BehaviorGraph) -> String {
    let mut out = String::new();
    for (a, b) in &graph.edges {
        out.push_str(&format!("{a} -> {b}\n"));
    }
    for n in &graph.nodes {
        if !graph.edges.iter().any(|(a, b)| a == n || b == n) {
            out.push_str(&format!("{n}\n"));
        }
    }
    out
}

/// `A -> B<TAB>reason` per violated edge.
pub fn violations_to_text(violations: &[EdgeViolation]) -> String {
    violations
        .iter()
        .map(|v| format!("{} -> {}\t{}\n", v.from, v.to, v.reason))
        .collect()
}
