//! Deterministic synchronous-round token-flow simulation.
//!
//! A round (one step) proceeds in three phases, each in a fixed order:
//!
//! 1. every live token advances one hop along each outgoing flow arc (by token
//!    id, then arc ordinal); fan-out replicates the token, the first arc keeping
//!    its id. Arrival at a process stage marks the token processed.
//! 2. every trigger arc whose source stage received a token this round fires
//!    (by arc ordinal) and activates its destination in the same round.
//! 3. activated stages run (by stage): a create stage mints a token whose
//!    payload tuples the payloads that reached receive or process stages in its
//!    thimac's subtree this round; a process stage records a process firing.
//!    Triggers out of these stages fire now and activate next round.
//!
//! A token about to leave over an arc that crosses a declared object's
//! boundary is halted with a breach record instead of moving.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Action, ArcId, ArcKind, Injection, Scenario, StageRef, StaticModel};
use crate::objectify::crossing;

pub type TokenId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Label(String),
    Tuple(Vec<String>),
}

impl Payload {
    /// Labels in order; a label is a one-element sequence.
    pub fn labels(&self) -> &[String] {
        match self {
            Payload::Label(l) => std::slice::from_ref(l),
            Payload::Tuple(ls) => ls,
        }
    }

    /// Flattened combination of `parts`; a single label stays a label.
    pub fn combine<'a>(parts: impl IntoIterator<Item = &'a Payload>) -> Option<Payload> {
        let mut labels: Vec<String> = parts
            .into_iter()
            .flat_map(|p| p.labels().iter().cloned())
            .collect();
        match labels.len() {
            0 => None,
            1 => labels.pop().map(Payload::Label),
            _ => Some(Payload::Tuple(labels)),
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Label(l) => f.write_str(l),
            Payload::Tuple(ls) => write!(f, "({})", ls.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub id: TokenId,
    pub payload: Payload,
    pub location: StageRef,
    pub processed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimState {
    /// Rounds executed so far (or the step jumped to while idle).
    pub step: u32,
    /// Live tokens in ascending id order.
    pub tokens: Vec<Token>,
    /// Stages to activate next round, each with the token that caused it.
    pub pending: BTreeMap<StageRef, TokenId>,
    pub next_id: TokenId,
}

impl SimState {
    pub fn new() -> Self {
        SimState::default()
    }

    pub fn token(&self, id: TokenId) -> Option<&Token> {
        self.tokens.iter().find(|t| t.id == id)
    }
}

/// One legal firing of the next round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Firing {
    Move { token: TokenId, arc: ArcId },
    /// The token would leave through an arc crossing an object boundary.
    Breach { token: TokenId, arc: ArcId },
    Trigger { arc: ArcId, token: TokenId },
    Activate { stage: StageRef, cause: TokenId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Move,
    Create,
    Trigger,
    Process,
    Breach,
    Limit,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Move => "move",
            RecordKind::Create => "create",
            RecordKind::Trigger => "trigger",
            RecordKind::Process => "process",
            RecordKind::Breach => "breach",
            RecordKind::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecordSubject {
    Stage(StageRef),
    Arc(ArcId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiringRecord {
    pub step: u32,
    pub kind: RecordKind,
    /// Absent only on the step-limit marker.
    pub token: Option<TokenId>,
    pub subject: Option<RecordSubject>,
    /// For a move that replicated a token: the token it was copied from.
    pub parent: Option<TokenId>,
    /// The token's payload, on create records.
    pub payload: Option<Payload>,
}

impl FiringRecord {
    fn new(step: u32, kind: RecordKind, token: TokenId, subject: RecordSubject) -> Self {
        FiringRecord {
            step,
            kind,
            token: Some(token),
            subject: Some(subject),
            parent: None,
            payload: None,
        }
    }

    pub fn stage(&self) -> Option<StageRef> {
        match self.subject {
            Some(RecordSubject::Stage(s)) => Some(s),
            _ => None,
        }
    }

    pub fn arc(&self) -> Option<ArcId> {
        match self.subject {
            Some(RecordSubject::Arc(a)) => Some(a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub records: Vec<FiringRecord>,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    step: u32,
    kind: &'a str,
    token: Option<TokenId>,
    subject: Option<String>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// True when the run stopped at the step limit with work remaining.
    pub fn hit_limit(&self) -> bool {
        self.records.last().is_some_and(|r| r.kind == RecordKind::Limit)
    }

    fn subject_path(model: &StaticModel, record: &FiringRecord) -> Option<String> {
        record.subject.map(|s| match s {
            RecordSubject::Stage(s) => model.stage_path(s),
            RecordSubject::Arc(a) => model.arc_label(a),
        })
    }

    /// `step<TAB>kind<TAB>token<TAB>subject` per record; `-` marks an absent field.
    pub fn to_text(&self, model: &StaticModel) -> String {
        let mut out = String::new();
        for r in &self.records {
            let token = r.token.map_or_else(|| "-".to_string(), |t| t.to_string());
            let subject = Self::subject_path(model, r).unwrap_or_else(|| "-".to_string());
            out.push_str(&format!("{}\t{}\t{token}\t{subject}\n", r.step, r.kind.as_str()));
        }
        out
    }

    /// One JSON object per line with keys step, kind, token, subject.
    pub fn to_json_lines(&self, model: &StaticModel) -> String {
        let mut out = String::new();
        for r in &self.records {
            let json = JsonRecord {
                step: r.step,
                kind: r.kind.as_str(),
                token: r.token,
                subject: Self::subject_path(model, r),
            };
            out.push_str(&serde_json::to_string(&json).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("injection of \"{payload}\" targets a stage that does not exist")]
    UnknownDestination { payload: String },
    #[error("injection of \"{payload}\" targets {action} stage; only transfer and create accept injections")]
    InvalidDestination { payload: String, action: Action },
}

fn breaches(model: &StaticModel, arc: ArcId) -> bool {
    let arc = model.arc(arc);
    model
        .thimac_ids()
        .filter(|&id| model.thimac(id).is_object())
        .any(|object| crossing(model, object, arc).is_some())
}

fn flows_from(model: &StaticModel, stage: StageRef) -> impl Iterator<Item = ArcId> + '_ {
    model
        .outgoing(stage)
        .filter(|a| a.kind == ArcKind::Flow)
        .map(|a| a.id)
}

fn triggers_from(model: &StaticModel, stage: StageRef) -> impl Iterator<Item = ArcId> + '_ {
    model
        .outgoing(stage)
        .filter(|a| a.kind == ArcKind::Trigger)
        .map(|a| a.id)
}

/// Every firing of the next round, in execution order: moves and breaches
/// (by token id, then arc), triggers from stages the moves reach (by arc),
/// then activations (by stage).
pub fn enabled_firings(model: &StaticModel, state: &SimState) -> Vec<Firing> {
    let mut firings = Vec::new();
    // First token to reach each stage this round.
    let mut reached: BTreeMap<StageRef, TokenId> = BTreeMap::new();
    for token in &state.tokens {
        let arcs: Vec<ArcId> = flows_from(model, token.location).collect();
        let breaching: Vec<ArcId> = arcs.iter().copied().filter(|&a| breaches(model, a)).collect();
        if breaching.is_empty() {
            for arc in arcs {
                firings.push(Firing::Move { token: token.id, arc });
                reached.entry(model.arc(arc).dst).or_insert(token.id);
            }
        } else {
            firings.extend(breaching.into_iter().map(|arc| Firing::Breach { token: token.id, arc }));
        }
    }
    let mut activations = state.pending.clone();
    for arc in model.arcs().iter().filter(|a| a.kind == ArcKind::Trigger) {
        if let Some(&token) = reached.get(&arc.src) {
            firings.push(Firing::Trigger { arc: arc.id, token });
            activations.entry(arc.dst).or_insert(token);
        }
    }
    firings.extend(
        activations
            .into_iter()
            .map(|(stage, cause)| Firing::Activate { stage, cause }),
    );
    firings
}

/// Executes one round. A state with nothing enabled is returned unchanged.
pub fn step(model: &StaticModel, state: &SimState) -> (SimState, Vec<FiringRecord>) {
    let firings = enabled_firings(model, state);
    if firings.is_empty() {
        return (state.clone(), Vec::new());
    }
    let t = state.step + 1;
    let mut next = SimState {
        step: t,
        tokens: Vec::with_capacity(state.tokens.len()),
        pending: BTreeMap::new(),
        next_id: state.next_id,
    };
    let mut records = Vec::new();
    let mut touched: Vec<TokenId> = Vec::new();
    // Payloads reaching receive/process stages this round, in move order.
    let mut arrivals: Vec<(StageRef, Payload)> = Vec::new();
    let mut fired: Vec<(StageRef, TokenId)> = Vec::new();

    for firing in firings {
        match firing {
            Firing::Move { token, arc } => {
                let original = state.token(token).expect("firing token is live");
                let dst = model.arc(arc).dst;
                let (id, parent) = if touched.contains(&token) {
                    next.next_id += 1;
                    (next.next_id - 1, Some(token))
                } else {
                    touched.push(token);
                    (token, None)
                };
                let processed = original.processed || dst.action == Action::Process;
                next.tokens.push(Token {
                    id,
                    payload: original.payload.clone(),
                    location: dst,
                    processed,
                });
                let mut record = FiringRecord::new(t, RecordKind::Move, id, RecordSubject::Arc(arc));
                record.parent = parent;
                records.push(record);
                if dst.action == Action::Process {
                    records.push(FiringRecord::new(t, RecordKind::Process, id, RecordSubject::Stage(dst)));
                }
                if matches!(dst.action, Action::Receive | Action::Process) {
                    arrivals.push((dst, original.payload.clone()));
                }
            }
            Firing::Breach { token, arc } => {
                if !touched.contains(&token) {
                    touched.push(token);
                }
                records.push(FiringRecord::new(t, RecordKind::Breach, token, RecordSubject::Arc(arc)));
            }
            Firing::Trigger { arc, token } => {
                records.push(FiringRecord::new(t, RecordKind::Trigger, token, RecordSubject::Arc(arc)));
            }
            Firing::Activate { stage, cause } => {
                let token = match stage.action {
                    Action::Create => {
                        let id = next.next_id;
                        next.next_id += 1;
                        let gathered = arrivals
                            .iter()
                            .filter(|(s, _)| model.in_subtree(s.thimac, stage.thimac))
                            .map(|(_, p)| p);
                        let payload = Payload::combine(gathered).unwrap_or_else(|| {
                            Payload::Label(format!("{}#{id}", model.thimac(stage.thimac).name))
                        });
                        next.tokens.push(Token {
                            id,
                            payload: payload.clone(),
                            location: stage,
                            processed: false,
                        });
                        let mut record =
                            FiringRecord::new(t, RecordKind::Create, id, RecordSubject::Stage(stage));
                        record.payload = Some(payload);
                        records.push(record);
                        id
                    }
                    Action::Process => {
                        records.push(FiringRecord::new(t, RecordKind::Process, cause, RecordSubject::Stage(stage)));
                        cause
                    }
                    // Validation keeps other targets out; they are inert here.
                    _ => continue,
                };
                fired.push((stage, token));
            }
        }
    }

    for (stage, token) in fired {
        for arc in triggers_from(model, stage) {
            records.push(FiringRecord::new(t, RecordKind::Trigger, token, RecordSubject::Arc(arc)));
            next.pending.entry(model.arc(arc).dst).or_insert(token);
        }
    }

    next.tokens.extend(state.tokens.iter().filter(|tok| !touched.contains(&tok.id)).cloned());
    next.tokens.sort_by_key(|tok| tok.id);
    (next, records)
}

fn check_injection(model: &StaticModel, injection: &Injection) -> Result<(), SimError> {
    let payload = injection.payload.clone();
    if !model.has_stage(injection.destination) {
        return Err(SimError::UnknownDestination { payload });
    }
    match injection.destination.action {
        Action::Transfer | Action::Create => Ok(()),
        action => Err(SimError::InvalidDestination { payload, action }),
    }
}

/// Places a new token at the injection's destination at the current step.
/// The destination fires, so its triggers record now and activate next round.
pub fn inject(
    model: &StaticModel,
    state: &SimState,
    injection: &Injection,
) -> Result<(SimState, Vec<FiringRecord>), SimError> {
    check_injection(model, injection)?;
    let mut next = state.clone();
    let id = next.next_id;
    next.next_id += 1;
    let stage = injection.destination;
    let payload = Payload::Label(injection.payload.clone());
    next.tokens.push(Token {
        id,
        payload: payload.clone(),
        location: stage,
        processed: false,
    });
    let mut create = FiringRecord::new(state.step, RecordKind::Create, id, RecordSubject::Stage(stage));
    create.payload = Some(payload);
    let mut records = vec![create];
    for arc in triggers_from(model, stage) {
        records.push(FiringRecord::new(state.step, RecordKind::Trigger, id, RecordSubject::Arc(arc)));
        next.pending.entry(model.arc(arc).dst).or_insert(id);
    }
    Ok((next, records))
}

/// Runs `scenario` until quiescence or until `max_steps` rounds have elapsed.
/// Injections for step k apply after round k. When nothing is enabled the run
/// jumps to the next injection's step. If the limit stops a run with work
/// remaining, a `limit` record is appended.
pub fn simulate(
    model: &StaticModel,
    scenario: &Scenario,
    max_steps: u32,
) -> Result<Trace, SimError> {
    Ok(run(model, scenario, max_steps)?.0)
}

/// Like [`simulate`], also returning the final state.
pub fn run(
    model: &StaticModel,
    scenario: &Scenario,
    max_steps: u32,
) -> Result<(Trace, SimState), SimError> {
    for injection in &scenario.injections {
        check_injection(model, injection)?;
    }
    let mut queue: Vec<&Injection> = scenario.injections.iter().collect();
    queue.sort_by_key(|i| i.step);
    let mut queue = queue.into_iter().peekable();

    let mut state = SimState::new();
    let mut records = Vec::new();
    loop {
        while let Some(injection) = queue.next_if(|i| i.step <= state.step) {
            let (next, mut recs) = inject(model, &state, injection)?;
            state = next;
            records.append(&mut recs);
        }
        let idle = enabled_firings(model, &state).is_empty();
        let limited = match queue.peek() {
            _ if !idle => state.step >= max_steps,
            None => break,
            Some(i) if i.step <= max_steps => {
                state.step = i.step;
                continue;
            }
            Some(_) => true,
        };
        if limited {
            records.push(FiringRecord {
                step: state.step,
                kind: RecordKind::Limit,
                token: None,
                subject: None,
                parent: None,
                payload: None,
            });
            break;
        }
        let (next, mut recs) = step(model, &state);
        state = next;
        records.append(&mut recs);
    }
    Ok((Trace { records }, state))
}
