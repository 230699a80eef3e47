//! Hand-written lexer and recursive-descent parser for the LTL surface
//! syntax.
//!
//! Grammar (loosest binding first; `U`/`W`/`R` and `->` associate to the
//! right, `&` and `|` to the left):
//!
//! ```text
//! implies  := or ('->' implies)?
//! or       := and ('|' and)*
//! and      := temporal ('&' temporal)*
//! temporal := unary (('U'|'W'|'R') temporal)?
//! unary    := ('!'|'X'|'G'|'F') unary | atom | 'true' | 'false' | '(' implies ')'
//! ```
//!
//! Atoms match `[a-zA-Z_][a-zA-Z0-9_]*`. The single capital letters
//! `X G F U W R` are operators, never atoms. Complement names (`~p`) are an
//! internal notation and are rejected here.

use super::Formula;

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Globally,
    Finally,
    Until,
    WeakUntil,
    Release,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom {s:?}"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Next => "'X'".into(),
            Tok::Globally => "'G'".into(),
            Tok::Finally => "'F'".into(),
            Tok::Until => "'U'".into(),
            Tok::WeakUntil => "'W'".into(),
            Tok::Release => "'R'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize, column: usize) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line,
            column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.column);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                '!' => {
                    self.bump();
                    out.push((Tok::Not, line, col));
                }
                '&' => {
                    self.bump();
                    out.push((Tok::And, line, col));
                }
                '|' => {
                    self.bump();
                    out.push((Tok::Or, line, col));
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        out.push((Tok::Implies, line, col));
                    } else {
                        return Err(ParseError::new(line, col, "expected '->' after '-'"));
                    }
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let tok = match ident.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "X" => Tok::Next,
                        "G" => Tok::Globally,
                        "F" => Tok::Finally,
                        "U" => Tok::Until,
                        "W" => Tok::WeakUntil,
                        "R" => Tok::Release,
                        _ => Tok::Ident(ident),
                    };
                    out.push((tok, line, col));
                }
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unexpected character {other:?}"),
                    ));
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, message)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let right = self.temporal()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        let op = match self.peek() {
            Some(Tok::Until) => Formula::until as fn(Formula, Formula) -> Formula,
            Some(Tok::WeakUntil) => Formula::weak_until,
            Some(Tok::Release) => Formula::release,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.temporal()?;
        Ok(op(left, right))
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
            Some(Tok::Globally) => {
                self.bump();
                Ok(Formula::globally(self.unary()?))
            }
            Some(Tok::Finally) => {
                self.bump();
                Ok(Formula::finally(self.unary()?))
            }
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::False)
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else {
                    unreachable!()
                };
                Ok(Formula::Atom(name))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.implies()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error_here("expected ')'"))
                }
            }
            Some(other) => Err(self.error_here(format!(
                "expected a formula but found {}",
                other.describe()
            ))),
            None => Err(self.error_here("unexpected end of formula")),
        }
    }
}

fn parse_at(text: &str, line: usize, column: usize) -> Result<Formula, ParseError> {
    let tokens = Lexer::new(text, line, column).tokens()?;
    let end = tokens
        .last()
        .map(|&(ref t, l, c)| {
            let width = match t {
                Tok::Ident(s) => s.chars().count(),
                Tok::True => 4,
                Tok::False => 5,
                Tok::Implies => 2,
                _ => 1,
            };
            (l, c + width)
        })
        .unwrap_or((line, column));
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    if parser.peek().is_none() {
        return Err(parser.error_here("empty formula"));
    }
    let formula = parser.implies()?;
    if let Some(t) = parser.peek() {
        return Err(parser.error_here(format!("unexpected trailing {}", t.describe())));
    }
    Ok(formula)
}

/// Parses a single LTL formula.
pub fn parse_ltl(text: &str) -> Result<Formula, ParseError> {
    parse_at(text, 1, 1)
}

/// Parses a property file: one `name: formula` entry per line.
///
/// Blank lines and `#` comments are skipped. Property names must be unique
/// identifiers.
pub fn parse_properties(text: &str) -> Result<Vec<(String, Formula)>, ParseError> {
    let mut out: Vec<(String, Formula)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let colon = line.find(':').ok_or_else(|| {
            ParseError::new(line_no, 1, "expected 'name: formula'".to_string())
        })?;
        let name = line[..colon].trim();
        if !is_identifier(name) {
            return Err(ParseError::new(
                line_no,
                1,
                format!("invalid property name {name:?}"),
            ));
        }
        if out.iter().any(|(n, _)| n == name) {
            return Err(ParseError::new(
                line_no,
                1,
                format!("duplicate property name {name:?}"),
            ));
        }
        let formula_text = &line[colon + 1..];
        let column = colon + 2; // 1-based position right after the colon
        let formula = parse_at(formula_text, line_no, column)?;
        out.push((name.to_string(), formula));
    }
    Ok(out)
}

/// True for `[a-zA-Z_][a-zA-Z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
