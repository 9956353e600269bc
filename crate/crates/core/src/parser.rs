//! A small expression language for phase-space polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`: `-q1^2` is `-(q1^2)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{
    coefficient_from_f64, imaginary_unit, poly_add, poly_mul, poly_pow, poly_sub,
    AlgebraError, PhasePolynomial, Variable,
};

/// The grammar as printed by the command-line help.
pub const GRAMMAR: &str = "\
Expression grammar:

expr   := term (('+' | '-') term)*
term   := unary ('*' unary)*
unary  := '-' unary | power          (-q1^2 means -(q1^2))
power  := atom ('^' integer)?        (non-negative integer literal)
atom   := number | identifier | '(' expr ')'
identifiers: q1..qd, p1..pd, i (imaginary unit), hbar, bound --param names
no division, no implicit multiplication";

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Plus,
    Minus,
    Times,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid character {ch:?} at offset {position}")]
    InvalidCharacter { ch: char, position: usize },
    #[error("syntax error at offset {position}: {message}")]
    Syntax { message: String, position: usize },
    #[error("unknown identifier '{name}' at offset {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("variable index {index} exceeds dimension {dimension} at offset {position}")]
    IndexExceedsDimension {
        index: usize,
        dimension: usize,
        position: usize,
    },
    #[error("exponent must be a non-negative integer literal at offset {position}")]
    InvalidExponent { position: usize },
    #[error("invalid number '{text}' at offset {position}")]
    InvalidNumber { text: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::InvalidCharacter { position, .. }
            | ParseError::Syntax { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::IndexExceedsDimension { position, .. }
            | ParseError::InvalidExponent { position }
            | ParseError::InvalidNumber { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BindingError {
    #[error("'{0}' is reserved and cannot be bound")]
    Reserved(String),
    #[error("'{0}' is not a valid identifier")]
    InvalidName(String),
    #[error("value for '{name}' must be finite, got {value}")]
    NonFinite { name: String, value: f64 },
    #[error("expected name=value, got '{0}'")]
    Malformed(String),
}

/// Numeric values for free identifiers such as `omega`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterBindings {
    values: BTreeMap<String, f64>,
}

fn is_reserved(name: &str) -> bool {
    if name == "i" || name == "hbar" {
        return true;
    }
    match name.strip_prefix('q').or_else(|| name.strip_prefix('p')) {
        Some(rest) => !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()),
        None => false,
    }
}

fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl ParameterBindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, value: f64) -> Result<(), BindingError> {
        if !is_identifier(name) {
            return Err(BindingError::InvalidName(name.to_string()));
        }
        if is_reserved(name) {
            return Err(BindingError::Reserved(name.to_string()));
        }
        if !value.is_finite() {
            return Err(BindingError::NonFinite {
                name: name.to_string(),
                value,
            });
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self, BindingError> {
        self.bind(name, value)?;
        Ok(self)
    }

    /// Parses `name=value`.
    pub fn bind_assignment(&mut self, assignment: &str) -> Result<(), BindingError> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| BindingError::Malformed(assignment.to_string()))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| BindingError::Malformed(assignment.to_string()))?;
        self.bind(name.trim(), value)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

fn scan_number(bytes: &[u8], start: usize) -> usize {
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let mut j = digits(start);
    if j < bytes.len() && bytes[j] == b'.' {
        j = digits(j + 1);
    }
    if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
        let mut k = j + 1;
        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
            k += 1;
        }
        if k < bytes.len() && bytes[k].is_ascii_digit() {
            j = digits(k);
        }
    }
    j
}

pub fn tokenize(source: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let single = match b {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Times),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            _ => None,
        };
        let (kind, end) = if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        } else if let Some(kind) = single {
            (kind, pos + 1)
        } else if b.is_ascii_digit() {
            (TokenKind::Number, scan_number(bytes, pos))
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let mut j = pos + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (TokenKind::Identifier, j)
        } else {
            let ch = source[pos..].chars().next().unwrap_or('\u{fffd}');
            return Err(ParseError::InvalidCharacter { ch, position: pos });
        };
        tokens.push(Token {
            kind,
            text: &source[pos..end],
            position: pos,
        });
        pos = end;
    }
    Ok(tokens)
}

struct Parser<'a, 'b> {
    tokens: Vec<Token<'a>>,
    next: usize,
    end: usize,
    dimension: usize,
    bindings: &'b ParameterBindings,
}

fn internal(e: AlgebraError) -> ParseError {
    // every polynomial built here has the parser's dimension
    unreachable!("dimension-consistent construction failed: {e}")
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.next).copied()
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn eat(&mut self, kind: TokenKind) -> Option<Token<'a>> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.next += 1;
                Some(t)
            }
            _ => None,
        }
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            message: message.to_string(),
            position: self.position(),
        }
    }

    fn expr(&mut self) -> Result<PhasePolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(TokenKind::Plus).is_some() {
                acc = poly_add(&acc, &self.term()?).map_err(internal)?;
            } else if self.eat(TokenKind::Minus).is_some() {
                acc = poly_sub(&acc, &self.term()?).map_err(internal)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PhasePolynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(TokenKind::Times).is_some() {
            acc = poly_mul(&acc, &self.unary()?).map_err(internal)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PhasePolynomial, ParseError> {
        if self.eat(TokenKind::Minus).is_some() {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<PhasePolynomial, ParseError> {
        let base = self.atom()?;
        if self.eat(TokenKind::Caret).is_none() {
            return Ok(base);
        }
        let position = self.position();
        let tok = self
            .eat(TokenKind::Number)
            .ok_or(ParseError::InvalidExponent { position })?;
        let e: u32 = tok
            .text
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(ParseError::InvalidExponent { position })?;
        Ok(poly_pow(&base, e))
    }

    fn atom(&mut self) -> Result<PhasePolynomial, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Number => {
                self.next += 1;
                let value: f64 = tok.text.parse().ok().filter(|v: &f64| v.is_finite()).ok_or(
                    ParseError::InvalidNumber {
                        text: tok.text.to_string(),
                        position: tok.position,
                    },
                )?;
                let c = coefficient_from_f64(value, 0.0).map_err(internal)?;
                Ok(PhasePolynomial::constant(self.dimension, c))
            }
            TokenKind::Identifier => {
                self.next += 1;
                self.identifier(tok)
            }
            TokenKind::LParen => {
                self.next += 1;
                let inner = self.expr()?;
                if self.eat(TokenKind::RParen).is_none() {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.syntax(&format!("unexpected '{}'", tok.text))),
        }
    }

    fn identifier(&self, tok: Token<'_>) -> Result<PhasePolynomial, ParseError> {
        let d = self.dimension;
        match tok.text {
            "i" => return Ok(PhasePolynomial::constant(d, imaginary_unit())),
            "hbar" => return Ok(PhasePolynomial::hbar(d)),
            _ => {}
        }
        if is_reserved(tok.text) {
            let index: usize = tok.text[1..].parse().unwrap_or(usize::MAX);
            if index == 0 {
                return Err(ParseError::UnknownIdentifier {
                    name: tok.text.to_string(),
                    position: tok.position,
                });
            }
            if index > d {
                return Err(ParseError::IndexExceedsDimension {
                    index,
                    dimension: d,
                    position: tok.position,
                });
            }
            let var = if tok.text.starts_with('q') {
                Variable::Q(index - 1)
            } else {
                Variable::P(index - 1)
            };
            return PhasePolynomial::variable(d, var).map_err(internal);
        }
        match self.bindings.get(tok.text) {
            Some(v) => {
                let c = coefficient_from_f64(v, 0.0).map_err(internal)?;
                Ok(PhasePolynomial::constant(d, c))
            }
            None => Err(ParseError::UnknownIdentifier {
                name: tok.text.to_string(),
                position: tok.position,
            }),
        }
    }
}

/// Parses `source` into a polynomial over `dimension` degrees of freedom.
pub fn parse_expression(
    source: &str,
    dimension: usize,
    bindings: &ParameterBindings,
) -> Result<PhasePolynomial, ParseError> {
    assert!(dimension > 0, "dimension must be positive");
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        next: 0,
        end: source.len(),
        dimension,
        bindings,
    };
    if parser.peek().is_none() {
        return Err(parser.syntax("empty expression"));
    }
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

/// Canonical text form; parses back to the same polynomial whenever every
/// coefficient is exactly representable as a double.
pub fn format_canonical(f: &PhasePolynomial) -> String {
    f.to_string()
}
