//! Shared test support: a random model generator and brute-force oracles that
//! recompute library results from first principles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use proptest::sample::Index;

use tm_core::build::{
    ArcDecl, BehaviorDecl, Declaration, EventDecl, InjectionDecl, PathRef, RegionItemDecl,
    ScenarioDecl, ThimacDecl,
};
use tm_core::diagnostic::{Code, Subject};
use tm_core::model::{Action, ArcId, ArcKind, Kind, RegionElement, StageRef, ThimacId};
use tm_core::sim::{RecordKind, RecordSubject, Trace};
use tm_core::{build_model, Event, StaticModel};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap()
}

pub fn corpus_model(name: &str) -> StaticModel {
    let r = tm_core::parse_named(name, &corpus_text(name));
    r.model
        .unwrap_or_else(|| panic!("{name}: {:?}", r.diagnostics))
}

/// `(file, profile)` pairs from the manifest.
pub fn manifest() -> Vec<(String, String)> {
    std::fs::read_to_string(corpus_dir().join("manifest.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (f, p) = l.split_once('\t').expect("file<TAB>profile");
            (f.to_string(), p.to_string())
        })
        .collect()
}

pub fn stage(model: &StaticModel, path: &str) -> StageRef {
    match model.resolve_path(path) {
        Ok(tm_core::Entity::Stage(s)) => s,
        other => panic!("{path}: {other:?}"),
    }
}

pub fn arc(model: &StaticModel, kind: ArcKind, src: &str, dst: &str) -> ArcId {
    model
        .find_arc(kind, stage(model, src), stage(model, dst))
        .unwrap_or_else(|| panic!("no arc {src} {} {dst}", kind.arrow()))
}

// ---------------------------------------------------------------- generator

const NON_CREATE: [Action; 4] = [
    Action::Process,
    Action::Release,
    Action::Transfer,
    Action::Receive,
];

const PAYLOADS: [&str; 6] = ["a", "x y", "q\"uote", "back\\slash", "tab\there", "line\nbreak"];

type ThimacGene = (bool, Index, bool, u8);
type ArcGene = (bool, Index, Index);
type GenArc = (ArcKind, (usize, Action), (usize, Action));

/// Lowers raw genes to declarations that always build: unique names,
/// resolvable stages, no self arcs, no same-thimac triggers, no duplicates.
fn lower(
    thimacs: Vec<ThimacGene>,
    arcs: Vec<ArcGene>,
    events: Vec<Vec<(bool, Index)>>,
    injections: Vec<(Index, u32, Index)>,
    behavior: Vec<(Index, Index)>,
) -> Vec<Declaration> {
    let n = thimacs.len();
    let parent: Vec<Option<usize>> = thimacs
        .iter()
        .enumerate()
        .map(|(i, (root, idx, _, _))| (i > 0 && !root).then(|| idx.index(i)))
        .collect();
    let mut path = vec![String::new(); n];
    for i in 0..n {
        path[i] = match parent[i] {
            Some(p) => format!("{}.T{i}", path[p]),
            None => format!("T{i}"),
        };
    }
    let mut stages: Vec<(usize, Action)> = Vec::new();
    let mut actions: Vec<Vec<Action>> = vec![Vec::new(); n];
    for (i, &(_, _, _, mask)) in thimacs.iter().enumerate() {
        if mask & 16 != 0 {
            actions[i].push(Action::Create);
        }
        stages.push((i, Action::Create));
        for (bit, a) in NON_CREATE.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                actions[i].push(*a);
                stages.push((i, *a));
            }
        }
    }
    fn tree(
        i: usize,
        genes: &[ThimacGene],
        parent: &[Option<usize>],
        actions: &[Vec<Action>],
    ) -> ThimacDecl {
        let kind = if genes[i].2 { Kind::Object } else { Kind::Thing };
        let mut d = ThimacDecl::new(format!("T{i}"), kind);
        for &a in &actions[i] {
            d = d.stage(a);
        }
        for c in (0..genes.len()).filter(|&c| parent[c] == Some(i)) {
            d = d.child(tree(c, genes, parent, actions));
        }
        d
    }
    let sp = |(t, a): (usize, Action)| format!("{}.{a}", path[t]);

    let mut decls: Vec<Declaration> = (0..n)
        .filter(|&i| parent[i].is_none())
        .map(|i| Declaration::Thimac(tree(i, &thimacs, &parent, &actions)))
        .collect();

    let mut arc_list: Vec<GenArc> = Vec::new();
    for (trigger, s, d) in arcs {
        let src = stages[s.index(stages.len())];
        let dst = stages[d.index(stages.len())];
        let kind = if trigger { ArcKind::Trigger } else { ArcKind::Flow };
        if src == dst || (trigger && src.0 == dst.0) || arc_list.contains(&(kind, src, dst)) {
            continue;
        }
        arc_list.push((kind, src, dst));
    }
    let arc_decl = |&(kind, s, d): &GenArc| ArcDecl {
        kind,
        src: PathRef::new(sp(s)),
        dst: PathRef::new(sp(d)),
        span: None,
    };
    decls.extend(arc_list.iter().map(|a| Declaration::Arc(arc_decl(a))));

    let mut event_names = Vec::new();
    for (k, items) in events.into_iter().enumerate() {
        let mut region: Vec<RegionItemDecl> = Vec::new();
        for (is_arc, idx) in items {
            let item = if is_arc && !arc_list.is_empty() {
                RegionItemDecl::Arc(arc_decl(&arc_list[idx.index(arc_list.len())]))
            } else {
                RegionItemDecl::Stage(PathRef::new(sp(stages[idx.index(stages.len())])))
            };
            if !region.contains(&item) {
                region.push(item);
            }
        }
        let name = format!("E{k}");
        event_names.push(name.clone());
        decls.push(Declaration::Event(EventDecl {
            name,
            region,
            span: None,
        }));
    }

    if !event_names.is_empty() && !behavior.is_empty() {
        let chains = behavior
            .into_iter()
            .map(|(a, b)| {
                vec![
                    (event_names[a.index(event_names.len())].clone(), None),
                    (event_names[b.index(event_names.len())].clone(), None),
                ]
            })
            .collect();
        decls.push(Declaration::Behavior(BehaviorDecl {
            name: "b".into(),
            chains,
            span: None,
        }));
    }

    let targets: Vec<(usize, Action)> = stages
        .iter()
        .copied()
        .filter(|(_, a)| matches!(a, Action::Transfer | Action::Create))
        .collect();
    decls.push(Declaration::Scenario(ScenarioDecl {
        name: "s".into(),
        injections: injections
            .into_iter()
            .map(|(dst, step, payload)| InjectionDecl {
                payload: PAYLOADS[payload.index(PAYLOADS.len())].to_string(),
                destination: PathRef::new(sp(targets[dst.index(targets.len())])),
                step,
                span: None,
            })
            .collect(),
        span: None,
    }));
    decls
}

/// Random well-formed declaration lists: up to 7 thimacs in an arbitrary
/// forest, up to 12 arcs, up to 4 events, one behavior and one scenario.
pub fn declarations() -> impl Strategy<Value = Vec<Declaration>> {
    (
        prop::collection::vec((any::<bool>(), any::<Index>(), any::<bool>(), 0u8..32), 1..8),
        prop::collection::vec((any::<bool>(), any::<Index>(), any::<Index>()), 0..13),
        prop::collection::vec(prop::collection::vec((any::<bool>(), any::<Index>()), 1..4), 0..5),
        prop::collection::vec((any::<Index>(), 0u32..5, any::<Index>()), 0..4),
        prop::collection::vec((any::<Index>(), any::<Index>()), 0..5),
    )
        .prop_map(|(t, a, e, i, b)| lower(t, a, e, i, b))
}

pub fn models() -> impl Strategy<Value = StaticModel> {
    declarations().prop_map(|d| build_model(&d).expect("generated declarations build"))
}

// ------------------------------------------------------------------ oracles

/// Ancestors by walking parent links directly.
fn chain(model: &StaticModel, mut id: ThimacId) -> Vec<ThimacId> {
    let mut out = Vec::new();
    while let Some(p) = model.thimacs()[id.0].parent {
        out.push(p);
        id = p;
    }
    out
}

fn strictly_inside(model: &StaticModel, id: ThimacId, whole: ThimacId) -> bool {
    chain(model, id).contains(&whole)
}

fn within(model: &StaticModel, id: ThimacId, whole: ThimacId) -> bool {
    id == whole || strictly_inside(model, id, whole)
}

/// Arcs with one endpoint strictly inside a part of `whole` and the other
/// outside its subtree.
pub fn violations_oracle(model: &StaticModel, whole: ThimacId) -> BTreeSet<ArcId> {
    model
        .arcs()
        .iter()
        .filter(|a| {
            let (s, d) = (a.src.thimac, a.dst.thimac);
            (strictly_inside(model, s, whole) && !within(model, d, whole))
                || (strictly_inside(model, d, whole) && !within(model, s, whole))
        })
        .map(|a| a.id)
        .collect()
}

/// The strict table, written out independently of the library.
pub fn strict_allows(src: Action, dst: Action, same: bool) -> bool {
    use Action::*;
    matches!(
        (src, dst, same),
        (Create, Process, true)
            | (Create, Release, true)
            | (Receive, Process, true)
            | (Receive, Release, true)
            | (Process, Release, true)
            | (Release, Transfer, true)
            | (Transfer, Transfer, false)
            | (Transfer, Receive, true)
    )
}

pub fn lenient_allows(src: Action, dst: Action, same: bool) -> bool {
    strict_allows(src, dst, same)
        || matches!(
            (src, dst, same),
            (Action::Process, Action::Process, false) | (Action::Process, Action::Receive, false)
        )
}

/// Every (code, arc) pair validate must report, tested rule by rule.
pub fn validate_oracle(model: &StaticModel, lenient: bool) -> BTreeSet<(Code, Subject)> {
    let mut out = BTreeSet::new();
    for a in model.arcs() {
        let subject = Subject::Arc(a.id);
        match a.kind {
            ArcKind::Flow => {
                let (s, d) = (a.src.thimac, a.dst.thimac);
                let same = s == d || strictly_inside(model, s, d) || strictly_inside(model, d, s);
                let ok = if lenient {
                    lenient_allows(a.src.action, a.dst.action, same)
                } else {
                    strict_allows(a.src.action, a.dst.action, same)
                };
                if !ok {
                    out.insert((Code::Adjacency, subject));
                }
            }
            ArcKind::Trigger => {
                if !matches!(a.dst.action, Action::Create | Action::Process) {
                    out.insert((Code::TriggerTarget, subject));
                }
                if a.src.thimac == a.dst.thimac {
                    out.insert((Code::TriggerLocal, subject));
                }
            }
        }
    }
    for (i, t) in model.thimacs().iter().enumerate() {
        if t.kind == Kind::Object {
            for id in violations_oracle(model, ThimacId(i)) {
                out.insert((Code::Encapsulation, Subject::Arc(id)));
            }
        }
    }
    out
}

/// Steps at which `element` fires, scanning the whole trace.
pub fn element_steps(model: &StaticModel, trace: &Trace, element: RegionElement) -> Vec<u32> {
    let mut steps: Vec<u32> = trace
        .records
        .iter()
        .filter(|r| match (r.kind, r.subject, element) {
            (RecordKind::Move | RecordKind::Trigger, Some(RecordSubject::Arc(a)), RegionElement::Arc(e)) => a == e,
            (RecordKind::Move, Some(RecordSubject::Arc(a)), RegionElement::Stage(s)) => {
                model.arcs()[a.0].dst == s
            }
            (RecordKind::Create | RecordKind::Process, Some(RecordSubject::Stage(st)), RegionElement::Stage(s)) => st == s,
            _ => false,
        })
        .map(|r| r.step)
        .collect();
    steps.dedup();
    steps
}

/// Occurrence k+1 is the latest, over region elements, of each element's
/// first firing after occurrence k.
pub fn occurrences_oracle(model: &StaticModel, trace: &Trace, events: &[Event]) -> Vec<(String, Vec<u32>)> {
    events
        .iter()
        .map(|e| {
            let per: Vec<Vec<u32>> = e.region.iter().map(|&el| element_steps(model, trace, el)).collect();
            let mut out = Vec::new();
            let mut prev: Option<u32> = None;
            loop {
                let next: Option<Vec<u32>> = per
                    .iter()
                    .map(|s| s.iter().copied().find(|&t| prev.is_none_or(|p| t > p)))
                    .collect();
                match next.and_then(|v| v.into_iter().max()) {
                    Some(t) if !per.is_empty() => {
                        out.push(t);
                        prev = Some(t);
                    }
                    _ => break,
                }
            }
            (e.name.clone(), out)
        })
        .collect()
}

/// Replays a trace, checking that every move leaves from where its token (or,
/// for a replica, its parent) stood at the start of the round.
pub fn replay_locality(model: &StaticModel, trace: &Trace) -> Result<(), String> {
    let mut at: BTreeMap<u64, StageRef> = BTreeMap::new();
    let mut i = 0;
    let records = &trace.records;
    while i < records.len() {
        let step = records[i].step;
        let mut updates: Vec<(u64, Option<StageRef>)> = Vec::new();
        while i < records.len() && records[i].step == step {
            let r = &records[i];
            match (r.kind, r.subject, r.token) {
                (RecordKind::Move, Some(RecordSubject::Arc(a)), Some(t)) => {
                    let origin = r.parent.unwrap_or(t);
                    let arc = &model.arcs()[a.0];
                    if at.get(&origin) != Some(&arc.src) {
                        return Err(format!("step {step}: token {t} moved along {a:?} from {:?}", at.get(&origin)));
                    }
                    updates.push((t, Some(arc.dst)));
                }
                (RecordKind::Create, Some(RecordSubject::Stage(s)), Some(t)) => updates.push((t, Some(s))),
                (RecordKind::Breach, _, Some(t)) => updates.push((t, None)),
                _ => {}
            }
            i += 1;
        }
        for (t, loc) in updates {
            match loc {
                Some(s) => at.insert(t, s),
                None => at.remove(&t),
            };
        }
    }
    Ok(())
}

// --------------------------------------------------------------- properties

pub const SIM_STEPS: u32 = 10;

fn diag_set(report: &tm_core::ValidationReport) -> BTreeSet<(Code, Subject)> {
    report
        .diagnostics
        .iter()
        .map(|d| (d.code, d.subject.expect("validate diagnostics name an arc")))
        .collect()
}

/// serialize ∘ parse is the identity on models and a fixpoint on text.
pub fn prop_round_trip(m: &StaticModel) -> Result<(), TestCaseError> {
    let text = tm_core::serialize(m);
    let r = tm_core::parse(&text);
    prop_assert!(r.diagnostics.is_empty(), "{:?}\n{text}", r.diagnostics);
    let back = r.model.unwrap();
    prop_assert_eq!(&back, m, "{}", text);
    prop_assert_eq!(tm_core::serialize(&back), text);
    Ok(())
}

/// Two runs of the same scenario give identical traces and final states.
pub fn prop_determinism(m: &StaticModel) -> Result<(), TestCaseError> {
    for s in m.scenarios() {
        let a = tm_core::sim::run(m, s, SIM_STEPS).unwrap();
        let b = tm_core::sim::run(m, s, SIM_STEPS).unwrap();
        prop_assert_eq!(a.0.to_text(m), b.0.to_text(m));
        prop_assert_eq!(&a.0, &b.0);
        prop_assert_eq!(a.1, b.1);
    }
    Ok(())
}

/// validate reports exactly the oracle's (code, arc) pairs under both profiles.
pub fn prop_validate(m: &StaticModel) -> Result<(), TestCaseError> {
    let strict = tm_core::validate(m, &tm_core::default_rule_profile(tm_core::Strictness::Strict));
    let lenient = tm_core::validate(m, &tm_core::default_rule_profile(tm_core::Strictness::Lenient));
    let (s, l) = (diag_set(&strict), diag_set(&lenient));
    prop_assert_eq!(&s, &validate_oracle(m, false));
    prop_assert_eq!(&l, &validate_oracle(m, true));
    prop_assert_eq!(strict.passed, s.is_empty());
    prop_assert!(l.is_subset(&s));
    Ok(())
}

/// object_violations matches the boundary oracle for every thimac.
pub fn prop_violations(m: &StaticModel) -> Result<(), TestCaseError> {
    for id in m.thimac_ids() {
        let got: BTreeSet<ArcId> = tm_core::object_violations(m, id)
            .unwrap()
            .iter()
            .map(|d| match d.subject {
                Some(Subject::Arc(a)) => a,
                other => panic!("{other:?}"),
            })
            .collect();
        prop_assert_eq!(got, violations_oracle(m, id));
    }
    Ok(())
}

/// objectify is idempotent, leaves no violations, survives a text round trip
/// and keeps every non-crossing arc.
pub fn prop_objectify(m: &StaticModel) -> Result<(), TestCaseError> {
    for id in m.thimac_ids() {
        let once = tm_core::objectify(m, id).unwrap();
        prop_assert!(once.thimac(id).is_object());
        prop_assert!(tm_core::object_violations(&once, id).unwrap().is_empty());
        prop_assert_eq!(&tm_core::objectify(&once, id).unwrap(), &once);
        let back = tm_core::parse(&tm_core::serialize(&once)).model.unwrap();
        prop_assert_eq!(&back, &once);
        let crossing = violations_oracle(m, id);
        for a in m.arcs().iter().filter(|a| !crossing.contains(&a.id)) {
            prop_assert!(once.find_arc(a.kind, a.src, a.dst).is_some());
        }
    }
    Ok(())
}

/// Occurrences match the oracle; the derived behavior conforms to its own
/// run, is a chain plus self-loops, and agrees with the table.
pub fn prop_derive_check(m: &StaticModel) -> Result<(), TestCaseError> {
    for s in m.scenarios() {
        let trace = tm_core::simulate(m, s, SIM_STEPS).unwrap();
        let table = tm_core::occurrences(m, &trace, m.events()).unwrap();
        prop_assert_eq!(&table.entries, &occurrences_oracle(m, &trace, m.events()));
        let derived = tm_core::derive_behavior(&table);
        prop_assert!(tm_core::check_behavior(&derived, &table).unwrap().is_empty());
        let occurring: Vec<&str> = table
            .entries
            .iter()
            .filter(|(_, steps)| !steps.is_empty())
            .map(|(n, _)| n.as_str())
            .collect();
        prop_assert_eq!(derived.nodes.len(), occurring.len());
        for (a, b) in &derived.edges {
            if a == b {
                prop_assert!(table.count(a) > 1);
            } else {
                prop_assert!(table.first(a) <= table.first(b));
            }
        }
        let chain = derived.edges.iter().filter(|(a, b)| a != b).count();
        prop_assert_eq!(chain, occurring.len().saturating_sub(1));
        for b in m.behaviors() {
            let v = tm_core::check_behavior(b, &table).unwrap();
            for (from, to) in &b.edges {
                let bad = if from == to {
                    table.count(from) < 2
                } else {
                    match (table.first(from), table.first(to)) {
                        (Some(f), Some(t)) => f > t,
                        (Some(_), None) => true,
                        _ => false,
                    }
                };
                prop_assert_eq!(bad, v.iter().any(|e| &e.from == from && &e.to == to));
            }
        }
    }
    Ok(())
}

/// Every move leaves from where its token stood; steps never decrease.
pub fn prop_trace_replay(m: &StaticModel) -> Result<(), TestCaseError> {
    for s in m.scenarios() {
        let trace = tm_core::simulate(m, s, SIM_STEPS).unwrap();
        prop_assert!(trace.records.windows(2).all(|w| w[0].step <= w[1].step));
        if let Err(e) = replay_locality(m, &trace) {
            return Err(TestCaseError::fail(format!("{e}\n{}", trace.to_text(m))));
        }
    }
    Ok(())
}

// ----------------------------------------------------------- corpus checks

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_named(m: &StaticModel, scenario: &str) -> Result<Trace, String> {
    let s = m.scenario(scenario).ok_or(format!("no scenario {scenario}"))?;
    tm_core::simulate(m, s, 1000).map_err(|e| e.to_string())
}

/// Every manifest file parses without diagnostics and validates under its profile.
pub fn check_corpus() -> Check {
    let entries = manifest();
    ensure(entries.len() == 8, || format!("{} manifest entries", entries.len()))?;
    for (file, profile) in entries {
        let r = tm_core::parse_named(&file, &corpus_text(&file));
        let m = r.model.ok_or_else(|| format!("{file}: {:?}", r.diagnostics))?;
        ensure(r.diagnostics.is_empty(), || format!("{file}: {:?}", r.diagnostics))?;
        let strictness = tm_core::Strictness::from_name(&profile).ok_or(format!("profile {profile}"))?;
        let report = tm_core::validate(&m, &tm_core::default_rule_profile(strictness));
        ensure(report.passed && report.diagnostics.is_empty(), || {
            format!("{file}: {:?}", report.diagnostics)
        })?;
    }
    Ok(())
}

/// The part-exit arcs are exactly the violations; objectify clears them and
/// the result survives a text round trip.
pub fn check_chair_objectify() -> Check {
    let m = corpus_model("chair-object-bad.tm");
    let chair = match m.resolve_path("Chair") {
        Ok(tm_core::Entity::Thimac(id)) => id,
        other => return Err(format!("{other:?}")),
    };
    let got: Vec<ArcId> = tm_core::object_violations(&m, chair)
        .unwrap()
        .iter()
        .filter_map(|d| match d.subject {
            Some(Subject::Arc(a)) => Some(a),
            _ => None,
        })
        .collect();
    let want = vec![
        arc(&m, ArcKind::Flow, "Chair.Seat.transfer", "Outside.transfer"),
        arc(&m, ArcKind::Flow, "Chair.Leg.transfer", "Outside.transfer"),
    ];
    ensure(got == want, || format!("violations {got:?}, want {want:?}"))?;
    let fixed = tm_core::objectify(&m, chair).map_err(|e| e.to_string())?;
    ensure(tm_core::object_violations(&fixed, chair).unwrap().is_empty(), || "violations remain".into())?;
    let text = tm_core::serialize(&fixed);
    let back = tm_core::parse(&text).model.ok_or("objectified text does not parse")?;
    ensure(back == fixed, || "re-parse differs".into())?;
    ensure(tm_core::object_violations(&back, chair).unwrap().is_empty(), || "violations after re-parse".into())
}

/// E1..E5 first occur in order and derive the chain E1 → … → E5.
pub fn check_address_change() -> Check {
    let m = corpus_model("customer.tm");
    let trace = run_named(&m, "address_change")?;
    let table = tm_core::occurrences(&m, &trace, m.events()).map_err(|e| e.to_string())?;
    let names = ["E1", "E2", "E3", "E4", "E5"];
    let firsts: Vec<Option<u32>> = names.iter().map(|n| table.first(n)).collect();
    ensure(firsts.iter().all(Option::is_some), || format!("missing occurrence: {firsts:?}"))?;
    ensure(firsts.windows(2).all(|w| w[0] <= w[1]), || format!("order {firsts:?}"))?;
    let derived = tm_core::derive_behavior(&table);
    let edges: Vec<(&str, &str)> = derived.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let want: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
    ensure(edges == want, || format!("derived {edges:?}"))
}

/// The withdrawal trace contains the narrative firings in order.
pub fn check_withdrawal() -> Check {
    let m = corpus_model("withdrawal.tm");
    let text = run_named(&m, "withdraw")?.to_text(&m);
    let narrative = [
        "create\t2\tCustomer.Request.create",
        "move\t2\tCustomer.Request.transfer -> Account.transfer",
        "move\t2\tAccount.release -> Account.Identity.transfer",
        "process\t3\tAccount.Balance.process",
        "create\t5\tAccount.NewBalance.create",
        "move\t6\tATM.create -> ATM.release",
    ];
    let mut lines = text.lines();
    for want in narrative {
        ensure(lines.any(|l| l.split_once('\t').is_some_and(|(_, rest)| rest == want)), || {
            format!("`{want}` missing or out of order")
        })?;
    }
    Ok(())
}

/// Exactly one composite token, carrying (USA, tennis, 1st).
pub fn check_reification() -> Check {
    let m = corpus_model("playing.tm");
    let trace = run_named(&m, "usa_tennis_first")?;
    let composite: Vec<_> = trace
        .records
        .iter()
        .filter(|r| r.kind == RecordKind::Create)
        .filter_map(|r| r.payload.as_ref())
        .filter(|p| matches!(p, tm_core::sim::Payload::Tuple(_)))
        .collect();
    ensure(composite.len() == 1, || format!("{} composite tokens", composite.len()))?;
    let labels = composite[0].labels();
    ensure(labels == ["USA", "tennis", "1st"], || format!("payload {labels:?}"))
}

/// Three injections: E1 once, E2 three times, derived E1 → E2 plus E2 → E2.
pub fn check_repetition() -> Check {
    let m = corpus_model("order.tm");
    let trace = run_named(&m, "three_items")?;
    let table = tm_core::occurrences(&m, &trace, m.events()).map_err(|e| e.to_string())?;
    ensure(table.count("E1") == 1 && table.count("E2") == 3, || table.to_text())?;
    let derived = tm_core::derive_behavior(&table);
    let edges: Vec<(&str, &str)> = derived.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    ensure(edges.len() == 2 && derived.has_edge("E1", "E2") && derived.has_edge("E2", "E2"), || {
        format!("derived {edges:?}")
    })
}
