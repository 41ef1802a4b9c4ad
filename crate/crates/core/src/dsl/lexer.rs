use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(u64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Arrow,
    Squiggle,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Squiggle => "`~>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (usize, usize) {
        (self.line, self.col)
    }
}

/// Splits `text` into tokens. Never fails: malformed input yields `lex`
/// diagnostics and the offending characters are skipped. The token list always
/// ends with [`Tok::Eof`].
pub fn lex(file: &str, text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let span = |start: (usize, usize), end: (usize, usize)| SourceSpan::new(file, start, end);

    while let Some(c) = cur.peek() {
        let start = cur.pos();
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            cur.bump();
            tokens.push(Token {
                tok,
                span: span(start, cur.pos()),
            });
            continue;
        }
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '-' | '~' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    let tok = if c == '-' { Tok::Arrow } else { Tok::Squiggle };
                    tokens.push(Token {
                        tok,
                        span: span(start, cur.pos()),
                    });
                } else {
                    diags.push(
                        Diagnostic::error(Code::Lex, format!("expected `>` after `{c}`"))
                            .with_span(Some(span(start, cur.pos()))),
                    );
                }
            }
            '"' => {
                cur.bump();
                let mut value = String::new();
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            let esc_start = (cur.line, cur.col - 1);
                            match cur.peek() {
                                Some(e @ ('"' | '\\')) => {
                                    cur.bump();
                                    value.push(e);
                                }
                                Some('n') => {
                                    cur.bump();
                                    value.push('\n');
                                }
                                Some('t') => {
                                    cur.bump();
                                    value.push('\t');
                                }
                                _ => diags.push(
                                    Diagnostic::error(Code::Lex, "unknown escape sequence")
                                        .with_span(Some(span(esc_start, cur.pos()))),
                                ),
                            }
                        }
                        c => value.push(c),
                    }
                }
                if closed {
                    tokens.push(Token {
                        tok: Tok::Str(value),
                        span: span(start, cur.pos()),
                    });
                } else {
                    diags.push(
                        Diagnostic::error(Code::Lex, "unterminated string literal")
                            .with_span(Some(span(start, cur.pos()))),
                    );
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    cur.bump();
                }
                let sp = span(start, cur.pos());
                match digits.parse::<u64>() {
                    Ok(n) => tokens.push(Token {
                        tok: Tok::Int(n),
                        span: sp,
                    }),
                    Err(_) => diags.push(
                        Diagnostic::error(Code::Lex, "integer literal out of range")
                            .with_span(Some(sp)),
                    ),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut ident = String::new();
                while let Some(d) = cur
                    .peek()
                    .filter(|d| d.is_ascii_alphanumeric() || *d == '_')
                {
                    ident.push(d);
                    cur.bump();
                }
                tokens.push(Token {
                    tok: Tok::Ident(ident),
                    span: span(start, cur.pos()),
                });
            }
            other => {
                cur.bump();
                diags.push(
                    Diagnostic::error(Code::Lex, format!("unexpected character {other:?}"))
                        .with_span(Some(span(start, cur.pos()))),
                );
            }
        }
    }
    let end = cur.pos();
    tokens.push(Token {
        tok: Tok::Eof,
        span: span(end, end),
    });
    (tokens, diags)
}
