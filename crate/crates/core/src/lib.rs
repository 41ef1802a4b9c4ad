//! Thinging-machine conceptual models: a textual modeling language, structural
//! validation, token-flow simulation, event analysis and diagram export.

pub mod build;
pub mod diagnostic;
pub mod dot;
pub mod dsl;
pub mod events;
pub mod model;
pub mod objectify;
pub mod sim;
pub mod validate;

#[cfg(feature = "cli")]
pub mod cli;

pub use build::build_model;
pub use diagnostic::{Code, Diagnostic, Severity, SourceSpan, Subject};
pub use dot::export_dot;
pub use dsl::{parse, parse_named, serialize, ParseResult};
pub use events::{check_behavior, derive_behavior, occurrences, OccurrenceTable};
pub use model::{
    Action, Arc, ArcId, ArcKind, BehaviorGraph, Entity, Event, Kind, RegionElement, Scenario,
    StageRef, StaticModel, Thimac, ThimacId,
};
pub use objectify::{object_violations, objectify};
pub use sim::{enabled_firings, simulate, step, SimState, Trace};
pub use validate::{default_rule_profile, validate, RuleProfile, Strictness, ValidationReport};
