//! Programmatic constructor for [`StaticModel`]. The DSL parser lowers its
//! syntax tree into these declarations, so both routes share one set of
//! structural checks.

use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::model::{
    Action, Arc, ArcId, ArcKind, BehaviorGraph, Entity, Event, Injection, Kind, RegionElement,
    ResolveError, Scenario, StageRef, StaticModel, Thimac, ThimacId,
};

/// A dotted path as written, with its location when it came from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRef {
    pub text: String,
    pub span: Option<SourceSpan>,
}

impl PathRef {
    pub fn new(text: impl Into<String>) -> Self {
        PathRef {
            text: text.into(),
            span: None,
        }
    }
}

impl From<&str> for PathRef {
    fn from(s: &str) -> Self {
        PathRef::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThimacDecl {
    pub name: String,
    pub kind: Kind,
    pub stages: Vec<(Action, Option<SourceSpan>)>,
    pub children: Vec<ThimacDecl>,
    pub span: Option<SourceSpan>,
}

impl ThimacDecl {
    pub fn new(name: impl Into<String>, kind: Kind) -> Self {
        ThimacDecl {
            name: name.into(),
            kind,
            stages: Vec::new(),
            children: Vec::new(),
            span: None,
        }
    }

    pub fn thing(name: impl Into<String>) -> Self {
        ThimacDecl::new(name, Kind::Thing)
    }

    pub fn object(name: impl Into<String>) -> Self {
        ThimacDecl::new(name, Kind::Object)
    }

    pub fn stage(mut self, action: Action) -> Self {
        self.stages.push((action, None));
        self
    }

    pub fn child(mut self, child: ThimacDecl) -> Self {
        self.children.push(child);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDecl {
    pub kind: ArcKind,
    pub src: PathRef,
    pub dst: PathRef,
    pub span: Option<SourceSpan>,
}

impl ArcDecl {
    pub fn flow(src: impl Into<PathRef>, dst: impl Into<PathRef>) -> Self {
        ArcDecl {
            kind: ArcKind::Flow,
            src: src.into(),
            dst: dst.into(),
            span: None,
        }
    }

    pub fn trigger(src: impl Into<PathRef>, dst: impl Into<PathRef>) -> Self {
        ArcDecl {
            kind: ArcKind::Trigger,
            ..ArcDecl::flow(src, dst)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionItemDecl {
    Stage(PathRef),
    Arc(ArcDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDecl {
    pub name: String,
    pub region: Vec<RegionItemDecl>,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorDecl {
    pub name: String,
    /// Each chain is `E1 -> E2 -> ...`; a one-element chain declares a node.
    pub chains: Vec<Vec<(String, Option<SourceSpan>)>>,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionDecl {
    pub payload: String,
    pub destination: PathRef,
    pub step: u32,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioDecl {
    pub name: String,
    pub injections: Vec<InjectionDecl>,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    Thimac(ThimacDecl),
    Arc(ArcDecl),
    Event(EventDecl),
    Behavior(BehaviorDecl),
    Scenario(ScenarioDecl),
}

/// Builds a model from ordered declarations. Thimacs are inserted first so
/// arcs, events and scenarios may refer to thimacs declared later in the text.
/// All problems are collected; the model is returned only if there are none.
pub fn build_model(declarations: &[Declaration]) -> Result<StaticModel, Vec<Diagnostic>> {
    let mut b = Builder::default();
    for decl in declarations {
        if let Declaration::Thimac(t) = decl {
            b.insert_thimac(t, None);
        }
    }
    for decl in declarations {
        if let Declaration::Arc(a) = decl {
            b.insert_arc(a);
        }
    }
    for decl in declarations {
        if let Declaration::Event(e) = decl {
            b.insert_event(e);
        }
    }
    for decl in declarations {
        if let Declaration::Behavior(bh) = decl {
            b.insert_behavior(bh);
        }
    }
    for decl in declarations {
        if let Declaration::Scenario(s) = decl {
            b.insert_scenario(s);
        }
    }
    if b.diagnostics.is_empty() {
        Ok(b.model)
    } else {
        Err(b.diagnostics)
    }
}

#[derive(Default)]
struct Builder {
    model: StaticModel,
    diagnostics: Vec<Diagnostic>,
}

impl Builder {
    fn error(&mut self, code: Code, message: String, span: &Option<SourceSpan>) {
        self.diagnostics
            .push(Diagnostic::error(code, message).with_span(span.clone()));
    }

    fn insert_thimac(&mut self, decl: &ThimacDecl, parent: Option<ThimacId>) {
        if Action::from_name(&decl.name).is_some() {
            self.error(
                Code::Reserved,
                format!("`{}` is an action name and cannot name a thimac", decl.name),
                &decl.span,
            );
            return;
        }
        let siblings: Vec<ThimacId> = match parent {
            Some(p) => self.model.thimacs[p.0].children.clone(),
            None => self.model.roots().collect(),
        };
        if siblings
            .iter()
            .any(|&s| self.model.thimacs[s.0].name == decl.name)
        {
            let scope = match parent {
                Some(p) => format!("in `{}`", self.model.thimac_path(p)),
                None => "at top level".to_string(),
            };
            self.error(
                Code::Duplicate,
                format!("duplicate thimac name `{}` {scope}", decl.name),
                &decl.span,
            );
            return;
        }
        let id = ThimacId(self.model.thimacs.len());
        let mut stages = Vec::new();
        for (action, span) in &decl.stages {
            if stages.contains(action) {
                self.error(
                    Code::Duplicate,
                    format!("stage `{action}` declared twice on `{}`", decl.name),
                    span,
                );
            } else {
                stages.push(*action);
            }
        }
        self.model.thimacs.push(Thimac {
            name: decl.name.clone(),
            kind: decl.kind,
            parent,
            children: Vec::new(),
            stages,
        });
        if let Some(p) = parent {
            self.model.thimacs[p.0].children.push(id);
        }
        for child in &decl.children {
            self.insert_thimac(child, Some(id));
        }
    }

    fn resolve_stage(&mut self, path: &PathRef) -> Option<StageRef> {
        match self.model.resolve_path(&path.text) {
            Ok(Entity::Stage(s)) => Some(s),
            Ok(Entity::Thimac(_)) => {
                self.error(
                    Code::ExpectedStage,
                    format!(
                        "`{}` names a thimac; a stage path ending in an action is required",
                        path.text
                    ),
                    &path.span,
                );
                None
            }
            Err(e @ ResolveError::InvalidPath(_)) => {
                self.error(Code::Syntax, e.to_string(), &path.span);
                None
            }
            Err(e) => {
                self.error(Code::Unresolved, e.to_string(), &path.span);
                None
            }
        }
    }

    fn check_arc(&mut self, decl: &ArcDecl) -> Option<(StageRef, StageRef)> {
        let src = self.resolve_stage(&decl.src);
        let dst = self.resolve_stage(&decl.dst);
        let (src, dst) = (src?, dst?);
        if src == dst {
            self.error(
                Code::SelfArc,
                format!("arc from `{}` to itself", decl.src.text),
                &decl.span,
            );
            return None;
        }
        if decl.kind == ArcKind::Trigger && src.thimac == dst.thimac {
            self.error(
                Code::TriggerLocal,
                format!(
                    "trigger `{} ~> {}` stays inside one thimac; triggers connect different machines",
                    decl.src.text, decl.dst.text
                ),
                &decl.span,
            );
            return None;
        }
        Some((src, dst))
    }

    fn insert_arc(&mut self, decl: &ArcDecl) {
        let Some((src, dst)) = self.check_arc(decl) else {
            return;
        };
        if self.model.find_arc(decl.kind, src, dst).is_some() {
            self.error(
                Code::Duplicate,
                format!(
                    "duplicate arc `{} {} {}`",
                    decl.src.text,
                    decl.kind.arrow(),
                    decl.dst.text
                ),
                &decl.span,
            );
            return;
        }
        let id = ArcId(self.model.arcs.len());
        self.model.arcs.push(Arc {
            id,
            kind: decl.kind,
            src,
            dst,
        });
    }

    fn insert_event(&mut self, decl: &EventDecl) {
        let duplicate = self.model.event(&decl.name).is_some();
        if duplicate {
            self.error(
                Code::Duplicate,
                format!("duplicate event `{}`", decl.name),
                &decl.span,
            );
        }
        if decl.region.is_empty() {
            self.error(
                Code::EmptyRegion,
                format!("event `{}` has an empty region", decl.name),
                &decl.span,
            );
        }
        let mut region = Vec::new();
        let mut ok = !duplicate;
        for item in &decl.region {
            let (element, span) = match item {
                RegionItemDecl::Stage(p) => match self.resolve_stage(p) {
                    Some(s) => (RegionElement::Stage(s), &p.span),
                    None => {
                        ok = false;
                        continue;
                    }
                },
                RegionItemDecl::Arc(a) => {
                    let Some((src, dst)) = self.check_arc(a) else {
                        ok = false;
                        continue;
                    };
                    match self.model.find_arc(a.kind, src, dst) {
                        Some(id) => (RegionElement::Arc(id), &a.span),
                        None => {
                            self.error(
                                Code::Unresolved,
                                format!(
                                    "no arc `{} {} {}` is declared",
                                    a.src.text,
                                    a.kind.arrow(),
                                    a.dst.text
                                ),
                                &a.span,
                            );
                            ok = false;
                            continue;
                        }
                    }
                }
            };
            if region.contains(&element) {
                let label = self.model.region_label(element);
                self.error(
                    Code::Duplicate,
                    format!("`{label}` appears twice in the region of `{}`", decl.name),
                    span,
                );
                ok = false;
            } else {
                region.push(element);
            }
        }
        if ok && !region.is_empty() {
            self.model.events.push(Event {
                name: decl.name.clone(),
                region,
            });
        }
    }

    fn insert_behavior(&mut self, decl: &BehaviorDecl) {
        if self.model.behavior(&decl.name).is_some() {
            self.error(
                Code::Duplicate,
                format!("duplicate behavior `{}`", decl.name),
                &decl.span,
            );
            return;
        }
        let mut graph = BehaviorGraph::new(&decl.name);
        let mut ok = true;
        for chain in &decl.chains {
            for (name, span) in chain {
                if self.model.event(name).is_none() {
                    self.error(
                        Code::Unresolved,
                        format!("behavior `{}` names unknown event `{name}`", decl.name),
                        span,
                    );
                    ok = false;
                }
            }
            match chain.as_slice() {
                [(single, _)] => graph.add_node(single),
                _ => {
                    for pair in chain.windows(2) {
                        graph.add_edge(&pair[0].0, &pair[1].0);
                    }
                }
            }
        }
        if ok {
            self.model.behaviors.push(graph);
        }
    }

    fn insert_scenario(&mut self, decl: &ScenarioDecl) {
        if self.model.scenario(&decl.name).is_some() {
            self.error(
                Code::Duplicate,
                format!("duplicate scenario `{}`", decl.name),
                &decl.span,
            );
            return;
        }
        let mut injections = Vec::new();
        let mut ok = true;
        for inj in &decl.injections {
            let Some(destination) = self.resolve_stage(&inj.destination) else {
                ok = false;
                continue;
            };
            if !matches!(destination.action, Action::Transfer | Action::Create) {
                self.error(
                    Code::InjectionTarget,
                    format!(
                        "injections enter at a transfer or create stage, not `{}`",
                        inj.destination.text
                    ),
                    &inj.destination.span,
                );
                ok = false;
                continue;
            }
            injections.push(Injection {
                payload: inj.payload.clone(),
                destination,
                step: inj.step,
            });
        }
        if ok {
            self.model.scenarios.push(Scenario {
                name: decl.name.clone(),
                injections,
            });
        }
    }
}
