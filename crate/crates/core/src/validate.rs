//! Well-formedness of static models: stage adjacency, trigger targets and
//! object encapsulation.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagnostic::{has_errors, Code, Diagnostic, Subject};
use crate::dsl::{lex, Parser, Tok};
use crate::model::{Action, Arc, ArcKind, StaticModel};
use crate::objectify::{crossing, violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Locality {
    /// Same thimac, or one is an ancestor of the other.
    Same,
    /// Anything else: the arc hops between distinct machines.
    Cross,
}

impl Locality {
    pub fn as_str(self) -> &'static str {
        match self {
            Locality::Same => "same",
            Locality::Cross => "cross",
        }
    }

    pub fn from_name(name: &str) -> Option<Locality> {
        match name {
            "same" => Some(Locality::Same),
            "cross" => Some(Locality::Cross),
            _ => None,
        }
    }
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

impl Strictness {
    pub fn as_str(self) -> &'static str {
        match self {
            Strictness::Strict => "strict",
            Strictness::Lenient => "lenient",
        }
    }

    pub fn from_name(name: &str) -> Option<Strictness> {
        match name {
            "strict" => Some(Strictness::Strict),
            "lenient" => Some(Strictness::Lenient),
            _ => None,
        }
    }
}

pub type Adjacency = (Action, Action, Locality);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleProfile {
    pub name: String,
    pub flow_adjacency: BTreeSet<Adjacency>,
    pub trigger_targets: BTreeSet<Action>,
    /// The built-in profile this one is, or extends.
    pub strictness: Strictness,
}

const STRICT_FLOWS: [Adjacency; 8] = {
    use Action::*;
    use Locality::*;
    [
        (Create, Process, Same),
        (Create, Release, Same),
        (Receive, Process, Same),
        (Receive, Release, Same),
        (Process, Release, Same),
        (Release, Transfer, Same),
        (Transfer, Transfer, Cross),
        (Transfer, Receive, Same),
    ]
};

const LENIENT_EXTRA: [Adjacency; 2] = [
    (Action::Process, Action::Process, Locality::Cross),
    (Action::Process, Action::Receive, Locality::Cross),
];

pub fn default_rule_profile(strictness: Strictness) -> RuleProfile {
    let mut flow_adjacency: BTreeSet<Adjacency> = STRICT_FLOWS.into_iter().collect();
    if strictness == Strictness::Lenient {
        flow_adjacency.extend(LENIENT_EXTRA);
    }
    RuleProfile {
        name: strictness.as_str().to_string(),
        flow_adjacency,
        trigger_targets: [Action::Create, Action::Process].into_iter().collect(),
        strictness,
    }
}

impl RuleProfile {
    pub fn allows_flow(&self, src: Action, dst: Action, locality: Locality) -> bool {
        self.flow_adjacency.contains(&(src, dst, locality))
    }

    pub fn allows_trigger(&self, dst: Action) -> bool {
        self.trigger_targets.contains(&dst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub passed: bool,
}

pub fn locality(model: &StaticModel, arc: &Arc) -> Locality {
    if model.same_machine(arc.src.thimac, arc.dst.thimac) {
        Locality::Same
    } else {
        Locality::Cross
    }
}

/// Checks every arc, in declaration order, against the profile and against
/// the boundary of every declared object.
pub fn validate(model: &StaticModel, profile: &RuleProfile) -> ValidationReport {
    let objects: Vec<_> = model
        .thimac_ids()
        .filter(|&id| model.thimac(id).is_object())
        .collect();
    let mut diagnostics = Vec::new();
    for arc in model.arcs() {
        let label = model.arc_label(arc.id);
        let subject = Subject::Arc(arc.id);
        match arc.kind {
            ArcKind::Flow => {
                let loc = locality(model, arc);
                if !profile.allows_flow(arc.src.action, arc.dst.action, loc) {
                    diagnostics.push(
                        Diagnostic::error(
                            Code::Adjacency,
                            format!(
                                "flow `{label}` ({} -> {}, {loc}-machine) is not permitted by profile `{}`",
                                arc.src.action, arc.dst.action, profile.name
                            ),
                        )
                        .with_subject(subject),
                    );
                }
            }
            ArcKind::Trigger => {
                if !profile.allows_trigger(arc.dst.action) {
                    diagnostics.push(
                        Diagnostic::error(
                            Code::TriggerTarget,
                            format!(
                                "trigger `{label}` targets a {} stage; profile `{}` permits only {}",
                                arc.dst.action,
                                profile.name,
                                join(&profile.trigger_targets)
                            ),
                        )
                        .with_subject(subject),
                    );
                }
                if arc.src.thimac == arc.dst.thimac {
                    diagnostics.push(
                        Diagnostic::error(
                            Code::TriggerLocal,
                            format!("trigger `{label}` stays within one thimac"),
                        )
                        .with_subject(subject),
                    );
                }
            }
        }
        for &object in &objects {
            if let Some(c) = crossing(model, object, arc) {
                diagnostics.push(violation(model, object, arc, c));
            }
        }
    }
    ValidationReport {
        passed: !has_errors(&diagnostics),
        diagnostics,
    }
}

fn join(actions: &BTreeSet<Action>) -> String {
    actions
        .iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Parses rule profiles from configuration text:
///
/// ```text
/// profile NAME [extends strict|lenient] {
///   flow ACTION -> ACTION same|cross
///   trigger ACTION
/// }
/// ```
///
/// A profile without `extends` starts from empty sets and is treated as
/// strict. Diagnostics carry spans in `file`.
pub fn parse_profiles(file: &str, text: &str) -> Result<Vec<RuleProfile>, Vec<Diagnostic>> {
    let (tokens, mut diagnostics) = lex(file, text);
    let mut p = Parser::new(tokens);
    let mut profiles: Vec<RuleProfile> = Vec::new();
    while !p.at_eof() {
        let start = p.span();
        match profile(&mut p) {
            Ok(prof) => {
                if profiles.iter().any(|q| q.name == prof.name) {
                    p.diagnostics.push(
                        Diagnostic::error(
                            Code::Duplicate,
                            format!("profile `{}` is defined twice", prof.name),
                        )
                        .with_span(Some(start)),
                    );
                } else {
                    profiles.push(prof);
                }
            }
            Err(_) => {
                if p.span() == start {
                    p.bump();
                }
                p.recover(&["profile"]);
            }
        }
    }
    diagnostics.append(&mut p.diagnostics);
    if has_errors(&diagnostics) {
        Err(diagnostics)
    } else {
        Ok(profiles)
    }
}

fn profile(p: &mut Parser) -> Result<RuleProfile, crate::dsl::Bail> {
    p.expect_keyword("profile")?;
    let (name, _) = p.ident("a profile name")?;
    let mut prof = RuleProfile {
        name,
        flow_adjacency: BTreeSet::new(),
        trigger_targets: BTreeSet::new(),
        strictness: Strictness::Strict,
    };
    if p.is_keyword("extends") {
        p.bump();
        let (base, _) = p.ident("`strict` or `lenient`")?;
        let Some(strictness) = Strictness::from_name(&base) else {
            return p.fail(format!("unknown base profile `{base}`; expected strict or lenient"));
        };
        let name = std::mem::take(&mut prof.name);
        prof = default_rule_profile(strictness);
        prof.name = name;
    }
    p.expect(Tok::LBrace)?;
    loop {
        if *p.peek() == Tok::RBrace {
            p.bump();
            return Ok(prof);
        }
        if p.is_keyword("flow") {
            p.bump();
            let (src, _) = p.action()?;
            p.expect(Tok::Arrow)?;
            let (dst, _) = p.action()?;
            let (loc, _) = p.ident("`same` or `cross`")?;
            let Some(loc) = Locality::from_name(&loc) else {
                return p.fail(format!("unknown locality `{loc}`; expected same or cross"));
            };
            prof.flow_adjacency.insert((src, dst, loc));
        } else if p.is_keyword("trigger") {
            p.bump();
            let (dst, _) = p.action()?;
            prof.trigger_targets.insert(dst);
        } else {
            let found = p.peek().describe();
            return p.fail(format!("expected `flow`, `trigger` or `}}`, found {found}"));
        }
    }
}
