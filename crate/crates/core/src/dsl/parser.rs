use crate::build::{
    ArcDecl, BehaviorDecl, Declaration, EventDecl, InjectionDecl, PathRef, RegionItemDecl,
    ScenarioDecl, ThimacDecl,
};
use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::dsl::lexer::{Tok, Token};
use crate::model::{Action, ArcKind, Kind};

/// Marker for "a syntax diagnostic has been recorded; resynchronise".
pub(crate) struct Bail;

pub(crate) type PResult<T> = Result<T, Bail>;

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    pub(crate) diagnostics: Vec<Diagnostic>,
}

const ITEM_KEYWORDS: [&str; 7] = [
    "thimac", "object", "flow", "trigger", "event", "behavior", "scenario",
];

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            depth: 0,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        match t.tok {
            Tok::LBrace => self.depth += 1,
            Tok::RBrace => self.depth = self.depth.saturating_sub(1),
            Tok::Eof => return t,
            _ => {}
        }
        self.pos += 1;
        t
    }

    pub(crate) fn fail<T>(&mut self, message: String) -> PResult<T> {
        let span = self.span();
        self.diagnostics
            .push(Diagnostic::error(Code::Syntax, message).with_span(Some(span)));
        Err(Bail)
    }

    fn unexpected<T>(&mut self, expected: &str) -> PResult<T> {
        let found = self.peek().describe();
        self.fail(format!("expected {expected}, found {found}"))
    }

    pub(crate) fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    pub(crate) fn expect_keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.is_keyword(kw) {
            Ok(self.bump().span)
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => self.unexpected(what),
        }
    }

    pub(crate) fn action(&mut self) -> PResult<(Action, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) => match Action::from_name(&s) {
                Some(a) => Ok((a, self.bump().span)),
                None => self.fail(format!(
                    "`{s}` is not an action; expected one of create, process, release, transfer, receive"
                )),
            },
            _ => self.unexpected("an action name"),
        }
    }

    /// Skips to the next item keyword at brace depth zero.
    pub(crate) fn recover(&mut self, keywords: &[&str]) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Ident(s) if self.depth == 0 && keywords.contains(&s.as_str()) => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn path(&mut self) -> PResult<PathRef> {
        let (mut text, start) = self.ident("a path")?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let (seg, _) = self.ident("an identifier after `.`")?;
            text.push('.');
            text.push_str(&seg);
        }
        Ok(PathRef {
            text,
            span: Some(start.to(&self.prev_span())),
        })
    }

    pub(crate) fn model(&mut self) -> Vec<Declaration> {
        let mut decls = Vec::new();
        while !self.at_eof() {
            let start = self.pos;
            match self.item() {
                Ok(d) => decls.push(d),
                Err(Bail) => {
                    if self.pos == start {
                        self.bump();
                    }
                    self.recover(&ITEM_KEYWORDS);
                }
            }
        }
        decls
    }

    fn item(&mut self) -> PResult<Declaration> {
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.unexpected("a declaration");
        };
        match kw.as_str() {
            "thimac" | "object" => self.thimac().map(Declaration::Thimac),
            "flow" | "trigger" => self.arc().map(Declaration::Arc),
            "event" => self.event().map(Declaration::Event),
            "behavior" => self.behavior().map(Declaration::Behavior),
            "scenario" => self.scenario().map(Declaration::Scenario),
            _ => self.fail(format!(
                "expected a declaration (thimac, object, flow, trigger, event, behavior, scenario), found `{kw}`"
            )),
        }
    }

    fn thimac(&mut self) -> PResult<ThimacDecl> {
        let head = self.bump();
        let kind = match &head.tok {
            Tok::Ident(s) if s == "object" => Kind::Object,
            _ => Kind::Thing,
        };
        let (name, _) = self.ident("a thimac name")?;
        self.expect(Tok::LBrace)?;
        let mut decl = ThimacDecl::new(name, kind);
        loop {
            match self.peek() {
                Tok::RBrace => break,
                Tok::Ident(s) if s == "stage" => {
                    self.bump();
                    let (action, span) = self.action()?;
                    decl.stages.push((action, Some(span)));
                }
                Tok::Ident(s) if s == "thimac" || s == "object" => {
                    decl.children.push(self.thimac()?);
                }
                _ => return self.unexpected("`stage`, `thimac`, `object` or `}`"),
            }
        }
        let end = self.bump().span;
        decl.span = Some(head.span.to(&end));
        Ok(decl)
    }

    fn arrow(&mut self) -> PResult<ArcKind> {
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Ok(ArcKind::Flow)
            }
            Tok::Squiggle => {
                self.bump();
                Ok(ArcKind::Trigger)
            }
            _ => self.unexpected("`->` or `~>`"),
        }
    }

    fn arc(&mut self) -> PResult<ArcDecl> {
        let head = self.bump();
        let kind = match &head.tok {
            Tok::Ident(s) if s == "trigger" => ArcKind::Trigger,
            _ => ArcKind::Flow,
        };
        let src = self.path()?;
        let arrow_span = self.span();
        let written = self.arrow()?;
        if written != kind {
            self.diagnostics.push(
                Diagnostic::error(
                    Code::Syntax,
                    format!(
                        "`{}` arcs are written with `{}`",
                        kind.keyword(),
                        kind.arrow()
                    ),
                )
                .with_span(Some(arrow_span)),
            );
            return Err(Bail);
        }
        let dst = self.path()?;
        Ok(ArcDecl {
            kind,
            src,
            span: Some(head.span.to(&self.prev_span())),
            dst,
        })
    }

    fn region_item(&mut self) -> PResult<RegionItemDecl> {
        let bracketed = *self.peek() == Tok::LBracket;
        let start = self.span();
        if bracketed {
            self.bump();
        }
        let src = self.path()?;
        let item = if matches!(self.peek(), Tok::Arrow | Tok::Squiggle) {
            let kind = self.arrow()?;
            let dst = self.path()?;
            let mut arc = ArcDecl {
                kind,
                src,
                dst,
                span: None,
            };
            if bracketed {
                self.expect(Tok::RBracket)?;
            }
            arc.span = Some(start.to(&self.prev_span()));
            RegionItemDecl::Arc(arc)
        } else {
            if bracketed {
                self.expect(Tok::RBracket)?;
            }
            RegionItemDecl::Stage(src)
        };
        Ok(item)
    }

    fn event(&mut self) -> PResult<EventDecl> {
        let head = self.bump();
        let (name, _) = self.ident("an event name")?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("region")?;
        self.expect(Tok::Colon)?;
        let mut region = vec![self.region_item()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            region.push(self.region_item()?);
        }
        let end = self.expect(Tok::RBrace)?;
        Ok(EventDecl {
            name,
            region,
            span: Some(head.span.to(&end)),
        })
    }

    fn chain(&mut self) -> PResult<Vec<(String, Option<SourceSpan>)>> {
        let (first, span) = self.ident("an event name")?;
        let mut chain = vec![(first, Some(span))];
        while *self.peek() == Tok::Arrow {
            self.bump();
            let (next, span) = self.ident("an event name")?;
            chain.push((next, Some(span)));
        }
        Ok(chain)
    }

    fn behavior(&mut self) -> PResult<BehaviorDecl> {
        let head = self.bump();
        let (name, _) = self.ident("a behavior name")?;
        self.expect(Tok::LBrace)?;
        let mut chains = vec![self.chain()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            chains.push(self.chain()?);
        }
        let end = self.expect(Tok::RBrace)?;
        Ok(BehaviorDecl {
            name,
            chains,
            span: Some(head.span.to(&end)),
        })
    }

    fn scenario(&mut self) -> PResult<ScenarioDecl> {
        let head = self.bump();
        let (name, _) = self.ident("a scenario name")?;
        self.expect(Tok::LBrace)?;
        let mut injections = Vec::new();
        while self.is_keyword("inject") {
            let start = self.bump().span;
            let payload = match self.peek().clone() {
                Tok::Str(s) => {
                    self.bump();
                    s
                }
                _ => return self.unexpected("a quoted payload label"),
            };
            self.expect_keyword("at")?;
            let destination = self.path()?;
            self.expect_keyword("step")?;
            let step = match self.peek().clone() {
                Tok::Int(n) => match u32::try_from(n) {
                    Ok(n) => {
                        self.bump();
                        n
                    }
                    Err(_) => return self.fail(format!("step {n} is too large")),
                },
                _ => return self.unexpected("a step number"),
            };
            injections.push(InjectionDecl {
                payload,
                destination,
                step,
                span: Some(start.to(&self.prev_span())),
            });
        }
        let end = self.expect(Tok::RBrace)?;
        Ok(ScenarioDecl {
            name,
            injections,
            span: Some(head.span.to(&end)),
        })
    }
}
