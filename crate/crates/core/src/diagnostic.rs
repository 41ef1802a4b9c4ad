use std::fmt;

use serde::Serialize;

use crate::model::{ArcId, StageRef, ThimacId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Closed set of rule identifiers carried by every [`Diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Malformed character, string or arrow in the source text.
    Lex,
    /// Token sequence does not match the grammar.
    Syntax,
    /// A path, arc or event name that does not resolve.
    Unresolved,
    /// Duplicate sibling name, stage, arc, region element or named declaration.
    Duplicate,
    /// Thimac named after one of the five actions.
    Reserved,
    /// Arc whose source and destination are the same stage.
    SelfArc,
    /// A path used where a stage is required names a thimac.
    ExpectedStage,
    /// Event declared with an empty region.
    EmptyRegion,
    /// Scenario injection into a stage other than transfer or create.
    InjectionTarget,
    /// Trigger arc whose endpoints belong to one thimac.
    TriggerLocal,
    /// Flow arc not permitted by the rule profile's adjacency table.
    Adjacency,
    /// Trigger arc whose destination action the profile does not permit.
    TriggerTarget,
    /// Arc crossing an object's boundary without passing through the whole.
    Encapsulation,
}

impl Code {
    pub const ALL: [Code; 13] = [
        Code::Lex,
        Code::Syntax,
        Code::Unresolved,
        Code::Duplicate,
        Code::Reserved,
        Code::SelfArc,
        Code::ExpectedStage,
        Code::EmptyRegion,
        Code::InjectionTarget,
        Code::TriggerLocal,
        Code::Adjacency,
        Code::TriggerTarget,
        Code::Encapsulation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "lex",
            Code::Syntax => "syntax",
            Code::Unresolved => "unresolved",
            Code::Duplicate => "duplicate",
            Code::Reserved => "reserved",
            Code::SelfArc => "self-arc",
            Code::ExpectedStage => "expected-stage",
            Code::EmptyRegion => "empty-region",
            Code::InjectionTarget => "injection-target",
            Code::TriggerLocal => "trigger-local",
            Code::Adjacency => "adjacency",
            Code::TriggerTarget => "trigger-target",
            Code::Encapsulation => "encapsulation",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Model entity a diagnostic is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    Thimac(ThimacId),
    Stage(StageRef),
    Arc(ArcId),
}

/// 1-based line/column range; the end column is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: usize,
    pub start_column: usize,
    pub end_line: usize,
    pub end_column: usize,
}

impl SourceSpan {
    pub fn new(
        file: impl Into<String>,
        start: (usize, usize),
        end: (usize, usize),
    ) -> Self {
        SourceSpan {
            file: file.into(),
            start_line: start.0,
            start_column: start.1,
            end_line: end.0,
            end_column: end.1,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start_line: self.start_line,
            start_column: self.start_column,
            end_line: other.end_line,
            end_column: other.end_column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub subject: Option<Subject>,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            subject: None,
            message: message.into(),
            span: None,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, message)
        }
    }

    pub fn with_subject(mut self, subject: Subject) -> Self {
        self.subject = Some(subject);
        self
    }

    pub fn with_span(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
