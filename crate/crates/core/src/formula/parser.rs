//! Recursive-descent parser for the concrete formula syntax.
//!
//! Precedence, tightest first: prefix operators (`!`, `X`, `F`, `G` and the
//! quantifiers) > `U` (right associative) > `&` > `|` > `->` (right
//! associative). `#` starts a line comment.

use super::{Category, Formula};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("category error: `{formula}` is a path formula; the top level must be a state formula (wrap it in a quantifier)")]
    Category { formula: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    ExistsPath,
    ForallPath,
    ExistsCycle,
    ForallCycle,
    SimpleExistsCycle,
    Next,
    Finally,
    Globally,
    Until,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::ExistsPath => "`E`".into(),
            Tok::ForallPath => "`A`".into(),
            Tok::ExistsCycle => "`EC`".into(),
            Tok::ForallCycle => "`AC`".into(),
            Tok::SimpleExistsCycle => "`ECs`".into(),
            Tok::Next => "`X`".into(),
            Tok::Finally => "`F`".into(),
            Tok::Globally => "`G`".into(),
            Tok::Until => "`U`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
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

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '#' {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '!' => {
                    self.bump();
                    Tok::Not
                }
                '&' => {
                    self.bump();
                    Tok::And
                }
                '|' => {
                    self.bump();
                    Tok::Or
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::Implies
                    } else {
                        return Err(self.error("expected `->`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match name.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "E" => Tok::ExistsPath,
                        "A" => Tok::ForallPath,
                        "EC" => Tok::ExistsCycle,
                        "AC" => Tok::ForallCycle,
                        "ECs" => Tok::SimpleExistsCycle,
                        "X" => Tok::Next,
                        "F" => Tok::Finally,
                        "G" => Tok::Globally,
                        "U" => Tok::Until,
                        _ => Tok::Ident(name),
                    }
                }
                other => return Err(self.error(format!("unexpected character `{other}`"))),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    // -> (right associative, loosest)
    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.and()?;
        if self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.or()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.until()?;
        if self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.and()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Until) {
            self.bump();
            let rhs = self.until()?;
            Ok(Formula::until(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Next) => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Some(Tok::Finally) => {
                self.bump();
                Ok(Formula::finally(self.unary()?))
            }
            Some(Tok::Globally) => {
                self.bump();
                Ok(Formula::globally(self.unary()?))
            }
            Some(Tok::ExistsPath) => {
                self.bump();
                Ok(Formula::exists_path(self.unary()?))
            }
            Some(Tok::ForallPath) => {
                self.bump();
                Ok(Formula::forall_path(self.unary()?))
            }
            Some(Tok::ExistsCycle) => {
                self.bump();
                Ok(Formula::exists_cycle(self.unary()?))
            }
            Some(Tok::ForallCycle) => {
                self.bump();
                Ok(Formula::forall_cycle(self.unary()?))
            }
            Some(Tok::SimpleExistsCycle) => {
                self.bump();
                Ok(Formula::simple_exists_cycle(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.implies()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(ParseError::Syntax {
                        line: self.toks[self.pos - 1].1,
                        col: self.toks[self.pos - 1].2,
                        message: format!("expected `)`, found {}", t.describe()),
                    }),
                    None => {
                        self.pos -= 1;
                        Err(self.error("expected `)`, found end of input"))
                    }
                }
            }
            Some(t) => Err(self.error(format!("expected a formula, found {}", t.describe()))),
            None => Err(self.error("expected a formula, found end of input")),
        }
    }
}

/// Parse a state formula. Path formulas at the top level (for example a bare
/// `X p`) are rejected with a category error rather than a syntax error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut end = (1usize, 1usize);
    for c in text.chars() {
        if c == '\n' {
            end.0 += 1;
            end.1 = 1;
        } else {
            end.1 += 1;
        }
    }
    let toks = Lexer::new(text).tokenize()?;
    let mut parser = Parser { toks, pos: 0, end };
    let f = parser.implies()?;
    if let Some(t) = parser.peek() {
        return Err(parser.error(format!("unexpected trailing {}", t.describe())));
    }
    if f.category() != Category::State {
        return Err(ParseError::Category {
            formula: f.to_string(),
        });
    }
    Ok(f)
}
