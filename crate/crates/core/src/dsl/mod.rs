//! Textual `.tm` surface language.
//!
//! ```text
//! model        := item* ;
//! item         := thimacDecl | arcDecl | eventDecl | behaviorDecl | scenarioDecl ;
//! thimacDecl   := ("thimac" | "object") IDENT "{" (thimacDecl | stageDecl)* "}" ;
//! stageDecl    := "stage" ACTION ;
//! arcDecl      := "flow" path "->" path | "trigger" path "~>" path ;
//! path         := IDENT ("." IDENT)* ;
//! eventDecl    := "event" IDENT "{" "region" ":" regionItem ("," regionItem)* "}" ;
//! regionItem   := path | path ("->" | "~>") path     (optionally in "[" "]")
//! behaviorDecl := "behavior" IDENT "{" chain ("," chain)* "}" ;
//! chain        := IDENT ("->" IDENT)* ;
//! scenarioDecl := "scenario" IDENT "{" ("inject" STRING "at" path "step" INT)* "}" ;
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

mod lexer;
mod parser;
mod serialize;

pub use serialize::serialize;

pub(crate) use lexer::{lex, Tok};
pub(crate) use parser::{Bail, Parser};

use crate::build::build_model;
use crate::diagnostic::{has_errors, Diagnostic};
use crate::model::StaticModel;

#[derive(Debug, Clone)]
pub struct ParseResult {
    /// Present iff no diagnostic has error severity.
    pub model: Option<StaticModel>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn is_ok(&self) -> bool {
        self.model.is_some()
    }
}

/// Parses `.tm` text. Total: malformed input produces diagnostics, never a panic.
pub fn parse(text: &str) -> ParseResult {
    parse_named("<input>", text)
}

/// Like [`parse`], recording `file` in every diagnostic span.
pub fn parse_named(file: &str, text: &str) -> ParseResult {
    let (tokens, mut diagnostics) = lex(file, text);
    let mut parser = Parser::new(tokens);
    let decls = parser.model();
    diagnostics.append(&mut parser.diagnostics);
    if has_errors(&diagnostics) {
        return ParseResult {
            model: None,
            diagnostics,
        };
    }
    match build_model(&decls) {
        Ok(model) => ParseResult {
            model: Some(model),
            diagnostics,
        },
        Err(mut errs) => {
            diagnostics.append(&mut errs);
            ParseResult {
                model: None,
                diagnostics,
            }
        }
    }
}
