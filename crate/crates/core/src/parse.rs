//! Text and JSON forms of polynomials.
//!
//! Source files are a header line declaring the variable table followed by
//! an expression:
//!
//! ```text
//! vars: H mu l3
//! 2*(l3 + H)^2 - 3/2*mu
//! ```
//!
//! Grammar (no implicit multiplication, `^` right-associative with literal
//! non-negative integer exponents, unary minus looser than `^`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' unary) | ('/' INT))*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= INT ('^' exponent)?
//! primary := INT | IDENT | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::poly::{Poly, VarTable};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: undeclared identifier `{name}`")]
    Undeclared { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent must be a non-negative integer literal")]
    BadExponent { line: usize, col: usize },
    #[error("{line}:{col}: division by zero")]
    DivisionByZero { line: usize, col: usize },
    #[error("bad header: {0}")]
    Header(String),
    #[error("bad JSON polynomial: {0}")]
    Json(String),
}

/// Header plus expression text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySource {
    pub vars: Vec<String>,
    pub body: String,
    /// 1-based line on which `body` starts, for diagnostics.
    pub body_line: usize,
}

impl PolySource {
    /// Splits `text` into the `vars:` header and the remaining expression.
    pub fn from_text(text: &str) -> Result<PolySource, ParseError> {
        let mut lines = text.lines().enumerate().skip_while(|(_, l)| l.trim().is_empty());
        let (header_idx, header) = lines.next().ok_or_else(|| ParseError::Header("empty input".into()))?;
        let rest = header
            .trim()
            .strip_prefix("vars:")
            .ok_or_else(|| ParseError::Header(format!("expected `vars:` on line {}", header_idx + 1)))?;
        let vars: Vec<String> = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        for v in &vars {
            if !is_identifier(v) {
                return Err(ParseError::Header(format!("`{v}` is not an identifier")));
            }
        }
        let body: Vec<&str> = text.lines().skip(header_idx + 1).collect();
        Ok(PolySource {
            vars,
            body: body.join("\n"),
            body_line: header_idx + 2,
        })
    }

    pub fn table(&self) -> Result<Arc<VarTable>, ParseError> {
        VarTable::new(self.vars.iter().cloned()).map_err(|e| match e {
            AlgebraError::DuplicateVariable(v) => ParseError::Header(format!("duplicate variable `{v}`")),
            other => ParseError::Header(other.to_string()),
        })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a full source (header and body).
pub fn parse(src: &PolySource) -> Result<Poly, ParseError> {
    let table = src.table()?;
    Parser::new(&src.body, &table, src.body_line).parse_all()
}

/// Parses a source over a wider table that declares at least the
/// source's own variables (used to bring several files onto one table).
pub fn parse_over(src: &PolySource, table: &Arc<VarTable>) -> Result<Poly, ParseError> {
    src.table()?;
    if let Some(v) = src.vars.iter().find(|v| table.index_of(v).is_err()) {
        return Err(ParseError::Header(format!(
            "variable `{v}` missing from the shared table"
        )));
    }
    Parser::new(&src.body, table, src.body_line).parse_all()
}

/// Parses header-plus-expression text.
pub fn parse_text(text: &str) -> Result<Poly, ParseError> {
    parse(&PolySource::from_text(text)?)
}

/// Parses a bare expression over an existing table.
pub fn parse_with_table(expr: &str, table: &Arc<VarTable>) -> Result<Poly, ParseError> {
    Parser::new(expr, table, 1).parse_all()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "number `{i}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    table: &'a Arc<VarTable>,
    lex_error: Option<ParseError>,
}

fn tokenize(src: &str, first_line: usize) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(text.parse().expect("digits")), l0, c0));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::Syntax {
                    line: l0,
                    col: c0,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, l0, c0));
        col += 1;
        i += 1;
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(src: &str, table: &'a Arc<VarTable>, first_line: usize) -> Self {
        match tokenize(src, first_line) {
            Ok(toks) => Parser {
                toks,
                pos: 0,
                table,
                lex_error: None,
            },
            Err(e) => Parser {
                toks: vec![(Tok::Eof, first_line, 1)],
                pos: 0,
                table,
                lex_error: Some(e),
            },
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: String) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, message }
    }

    fn parse_all(mut self) -> Result<Poly, ParseError> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        if *self.peek() == Tok::Eof {
            return Err(self.syntax("empty expression".into()));
        }
        let p = self.expr()?;
        match self.peek() {
            Tok::Eof => Ok(p),
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => Err(self.syntax(format!(
                "unexpected {} (implicit multiplication is not allowed; write `*`)",
                self.peek()
            ))),
            other => Err(self.syntax(format!("unexpected {other}"))),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let (line, col) = self.here();
                    match self.bump() {
                        Tok::Int(d) if d.is_zero() => return Err(ParseError::DivisionByZero { line, col }),
                        Tok::Int(d) => acc = acc.scale(&Rational::new(1, d)),
                        other => {
                            return Err(ParseError::Syntax {
                                line,
                                col,
                                message: format!("expected integer divisor, found {other}"),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let (line, col) = self.here();
        let base = match self.bump() {
            Tok::Int(i) => i,
            _ => return Err(ParseError::BadExponent { line, col }),
        };
        let value = if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            num_traits::pow(base, e as usize)
        } else {
            base
        };
        value.to_u32().ok_or(ParseError::BadExponent { line, col })
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Int(i) => Ok(Poly::constant(self.table, Rational::from_integer(i))),
            Tok::Ident(name) => Poly::var(self.table, &name).map_err(|_| ParseError::Undeclared { line, col, name }),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.syntax(format!("expected `)`, found {}", self.peek())));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                line,
                col,
                message: format!("unexpected {other}"),
            }),
        }
    }
}

/// Canonical text: descending graded-lex terms, reduced fractions, `*` between
/// every factor. `parse(format(p)) == p`.
pub fn format(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let vars = p.vars();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mut factors: Vec<String> = Vec::new();
        for (idx, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars.name(idx).to_string()),
                _ => factors.push(format!("{}^{}", vars.name(idx), e)),
            }
        }
        if factors.is_empty() {
            write!(out, "{abs}").unwrap();
        } else if abs.is_one() {
            out.push_str(&factors.join("*"));
        } else {
            write!(out, "{abs}*{}", factors.join("*")).unwrap();
        }
    }
    out
}

/// Header-plus-body file form.
pub fn format_source(p: &Poly) -> String {
    format!("vars: {}\n{}\n", p.vars().names().join(" "), format(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
}

pub fn to_json(p: &Poly) -> PolyJson {
    PolyJson {
        vars: p.vars().names().to_vec(),
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                exps: m.exps().to_vec(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect(),
    }
}

pub fn from_json(j: &PolyJson) -> Result<Poly, ParseError> {
    let table = VarTable::new(j.vars.iter().cloned()).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let num: BigInt = t
            .num
            .parse()
            .map_err(|_| ParseError::Json(format!("bad numerator `{}`", t.num)))?;
        let den: BigInt = t
            .den
            .parse()
            .map_err(|_| ParseError::Json(format!("bad denominator `{}`", t.den)))?;
        let c = Rational::checked_new(num, den).ok_or_else(|| ParseError::Json("zero denominator".into()))?;
        terms.push((t.exps.clone(), c));
    }
    Poly::from_terms(&table, terms).map_err(|e| ParseError::Json(e.to_string()))
}

/// Report form of a polynomial: the canonical text up to a term cap,
/// otherwise a SHA-256 digest of that text with a degree summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PolyOutput {
    Full {
        terms: usize,
        text: String,
    },
    Digest {
        terms: usize,
        degree_map: BTreeMap<String, u32>,
        sha256: String,
    },
}

pub fn render_capped(p: &Poly, max_terms: usize) -> PolyOutput {
    let text = format(p);
    if p.len() <= max_terms {
        return PolyOutput::Full { terms: p.len(), text };
    }
    PolyOutput::Digest {
        terms: p.len(),
        degree_map: p.degree_map(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
    }
}
