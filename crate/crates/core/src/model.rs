//! Static model: the containment forest of thimacs, their stages, and the
//! flow/trigger arcs between stages.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One of the five generic actions a thimac's machine performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Create,
    Process,
    Release,
    Transfer,
    Receive,
}

impl Action {
    pub const ALL: [Action; 5] = [
        Action::Create,
        Action::Process,
        Action::Release,
        Action::Transfer,
        Action::Receive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Create => "create",
            Action::Process => "process",
            Action::Release => "release",
            Action::Transfer => "transfer",
            Action::Receive => "receive",
        }
    }

    pub fn from_name(name: &str) -> Option<Action> {
        Action::ALL.into_iter().find(|a| a.as_str() == name)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Thinging-stage thimac or an objectified one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Thing,
    Object,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Thing => "thimac",
            Kind::Object => "object",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ThimacId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArcId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StageRef {
    pub thimac: ThimacId,
    pub action: Action,
}

impl StageRef {
    pub fn new(thimac: ThimacId, action: Action) -> Self {
        StageRef { thimac, action }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Flow,
    Trigger,
}

impl ArcKind {
    pub fn arrow(self) -> &'static str {
        match self {
            ArcKind::Flow => "->",
            ArcKind::Trigger => "~>",
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ArcKind::Flow => "flow",
            ArcKind::Trigger => "trigger",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub kind: ArcKind,
    pub src: StageRef,
    pub dst: StageRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thimac {
    pub name: String,
    pub kind: Kind,
    pub parent: Option<ThimacId>,
    pub children: Vec<ThimacId>,
    /// Declared stages in declaration order. `create` is present implicitly
    /// whether or not it appears here.
    pub stages: Vec<Action>,
}

impl Thimac {
    pub fn has_stage(&self, action: Action) -> bool {
        action == Action::Create || self.stages.contains(&action)
    }

    pub fn is_object(&self) -> bool {
        self.kind == Kind::Object
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionElement {
    Stage(StageRef),
    Arc(ArcId),
}

/// A named region of the static model; its joint firing is an occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    pub region: Vec<RegionElement>,
}

/// Chronology over event names. Self-loops denote repetition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BehaviorGraph {
    pub name: String,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl BehaviorGraph {
    pub fn new(name: impl Into<String>) -> Self {
        BehaviorGraph {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_node(&mut self, node: &str) {
        if !self.nodes.iter().any(|n| n == node) {
            self.nodes.push(node.to_string());
        }
    }

    /// Adds an edge, inserting missing endpoints as nodes. Duplicate edges are ignored.
    pub fn add_edge(&mut self, from: &str, to: &str) {
        self.add_node(from);
        self.add_node(to);
        if !self.has_edge(from, to) {
            self.edges.push((from.to_string(), to.to_string()));
        }
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|(a, b)| a == from && b == to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub payload: String,
    pub destination: StageRef,
    pub step: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub injections: Vec<Injection>,
}

/// Anything a dotted path can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entity {
    Thimac(ThimacId),
    Stage(StageRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("`{0}` is not a dotted identifier path")]
    InvalidPath(String),
    #[error("unknown thimac `{segment}` in path `{path}`")]
    UnknownSegment { segment: String, path: String },
    #[error("stage `{action}` is not declared on `{thimac}`")]
    UndeclaredStage { thimac: String, action: Action },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no thimac with id {0}")]
    UnknownThimac(usize),
    #[error("no arc with id {0}")]
    UnknownArc(usize),
    #[error("stage {0} does not exist")]
    UnknownStage(String),
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Immutable static TM model. Construct with [`crate::build_model`] or by
/// parsing DSL text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StaticModel {
    pub(crate) thimacs: Vec<Thimac>,
    pub(crate) arcs: Vec<Arc>,
    pub(crate) events: Vec<Event>,
    pub(crate) behaviors: Vec<BehaviorGraph>,
    pub(crate) scenarios: Vec<Scenario>,
}

impl StaticModel {
    pub fn empty() -> Self {
        StaticModel::default()
    }

    pub fn is_empty(&self) -> bool {
        self.thimacs.is_empty()
            && self.arcs.is_empty()
            && self.events.is_empty()
            && self.behaviors.is_empty()
            && self.scenarios.is_empty()
    }

    /// Thimacs in declaration (depth-first pre-) order.
    pub fn thimacs(&self) -> &[Thimac] {
        &self.thimacs
    }

    pub fn thimac_ids(&self) -> impl Iterator<Item = ThimacId> + '_ {
        (0..self.thimacs.len()).map(ThimacId)
    }

    pub fn thimac(&self, id: ThimacId) -> &Thimac {
        &self.thimacs[id.0]
    }

    pub fn get_thimac(&self, id: ThimacId) -> Result<&Thimac, ModelError> {
        self.thimacs.get(id.0).ok_or(ModelError::UnknownThimac(id.0))
    }

    pub fn roots(&self) -> impl Iterator<Item = ThimacId> + '_ {
        self.thimac_ids()
            .filter(|&id| self.thimac(id).parent.is_none())
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, name: &str) -> Option<&Event> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn behaviors(&self) -> &[BehaviorGraph] {
        &self.behaviors
    }

    pub fn behavior(&self, name: &str) -> Option<&BehaviorGraph> {
        self.behaviors.iter().find(|b| b.name == name)
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn scenario(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn has_stage(&self, stage: StageRef) -> bool {
        self.thimacs
            .get(stage.thimac.0)
            .is_some_and(|t| t.has_stage(stage.action))
    }

    /// Every existing stage, thimac by thimac; `create` first, then declared
    /// stages in declaration order.
    pub fn stages(&self) -> Vec<StageRef> {
        let mut out = Vec::new();
        for id in self.thimac_ids() {
            out.push(StageRef::new(id, Action::Create));
            for &action in &self.thimac(id).stages {
                if action != Action::Create {
                    out.push(StageRef::new(id, action));
                }
            }
        }
        out
    }

    /// Depth-first pre-order traversal of the containment forest.
    pub fn depth_first(&self) -> Vec<ThimacId> {
        let mut out = Vec::with_capacity(self.thimacs.len());
        let mut stack: Vec<ThimacId> = self.roots().collect();
        stack.reverse();
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.thimac(id).children.iter().rev().copied());
        }
        out
    }

    /// Ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: ThimacId) -> impl Iterator<Item = ThimacId> + '_ {
        std::iter::successors(self.thimac(id).parent, move |p| self.thimac(*p).parent)
    }

    /// True when `id` lies strictly below `ancestor`.
    pub fn is_proper_descendant(&self, id: ThimacId, ancestor: ThimacId) -> bool {
        self.ancestors(id).any(|a| a == ancestor)
    }

    /// True when `id` is `root` or lies below it.
    pub fn in_subtree(&self, id: ThimacId, root: ThimacId) -> bool {
        id == root || self.is_proper_descendant(id, root)
    }

    /// Same thimac, or one contains the other.
    pub fn same_machine(&self, a: ThimacId, b: ThimacId) -> bool {
        a == b || self.is_proper_descendant(a, b) || self.is_proper_descendant(b, a)
    }

    pub fn outgoing(&self, stage: StageRef) -> impl Iterator<Item = &Arc> + '_ {
        self.arcs.iter().filter(move |a| a.src == stage)
    }

    pub fn find_arc(&self, kind: ArcKind, src: StageRef, dst: StageRef) -> Option<ArcId> {
        self.arcs
            .iter()
            .find(|a| a.kind == kind && a.src == src && a.dst == dst)
            .map(|a| a.id)
    }

    pub fn thimac_path(&self, id: ThimacId) -> String {
        let mut parts: Vec<&str> = self
            .ancestors(id)
            .map(|a| self.thimac(a).name.as_str())
            .collect();
        parts.reverse();
        parts.push(&self.thimac(id).name);
        parts.join(".")
    }

    pub fn stage_path(&self, stage: StageRef) -> String {
        format!("{}.{}", self.thimac_path(stage.thimac), stage.action)
    }

    pub fn entity_path(&self, entity: Entity) -> String {
        match entity {
            Entity::Thimac(id) => self.thimac_path(id),
            Entity::Stage(s) => self.stage_path(s),
        }
    }

    /// `src -> dst` or `src ~> dst`.
    pub fn arc_label(&self, id: ArcId) -> String {
        let arc = self.arc(id);
        format!(
            "{} {} {}",
            self.stage_path(arc.src),
            arc.kind.arrow(),
            self.stage_path(arc.dst)
        )
    }

    pub fn region_label(&self, element: RegionElement) -> String {
        match element {
            RegionElement::Stage(s) => self.stage_path(s),
            RegionElement::Arc(a) => self.arc_label(a),
        }
    }

    fn child_named(&self, parent: Option<ThimacId>, name: &str) -> Option<ThimacId> {
        match parent {
            None => self.roots().find(|&r| self.thimac(r).name == name),
            Some(p) => self
                .thimac(p)
                .children
                .iter()
                .copied()
                .find(|&c| self.thimac(c).name == name),
        }
    }

    /// Resolves a fully qualified dotted path. A trailing action name denotes
    /// a stage; resolution is case-sensitive.
    pub fn resolve_path(&self, path: &str) -> Result<Entity, ResolveError> {
        let segments: Vec<&str> = path.split('.').collect();
        if segments.iter().any(|s| !is_identifier(s)) {
            return Err(ResolveError::InvalidPath(path.to_string()));
        }
        let (thimac_segments, action) = match segments.split_last() {
            Some((last, rest)) if !rest.is_empty() => match Action::from_name(last) {
                Some(action) => (rest, Some(action)),
                None => (&segments[..], None),
            },
            _ => (&segments[..], None),
        };
        let mut current = None;
        for segment in thimac_segments {
            current = Some(self.child_named(current, segment).ok_or_else(|| {
                ResolveError::UnknownSegment {
                    segment: segment.to_string(),
                    path: path.to_string(),
                }
            })?);
        }
        let id = current.expect("path has at least one thimac segment");
        match action {
            None => Ok(Entity::Thimac(id)),
            Some(action) if self.thimac(id).has_stage(action) => {
                Ok(Entity::Stage(StageRef::new(id, action)))
            }
            Some(action) => Err(ResolveError::UndeclaredStage {
                thimac: self.thimac_path(id),
                action,
            }),
        }
    }
}
