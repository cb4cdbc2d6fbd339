//! Finite-trace LTL formulas: abstract syntax, parsing and printing.
//!
//! # Surface syntax
//!
//! | form            | meaning                |
//! |-----------------|------------------------|
//! | `true`          | true literal           |
//! | `keyA`          | atomic proposition     |
//! | `!f`            | negation               |
//! | `X f`           | next                   |
//! | `F f`           | eventually             |
//! | `G f`           | globally               |
//! | `f & g`         | conjunction            |
//! | `f \| g`        | disjunction            |
//! | `f -> g`        | implication            |
//! | `f U g`         | until                  |
//! | `f W g`         | weak until             |
//! | `f R g`         | release                |
//! | `f M g`         | strong release         |
//!
//! Atoms match `[A-Za-z_][A-Za-z0-9_]*` and may not be one of the reserved
//! words `X F G U W R M true false`. There is no `false` literal; write
//! `!true`.
//!
//! # Precedence (strongest to weakest)
//!
//! 1. parentheses
//! 2. unary `!`, `X`, `F`, `G`
//! 3. binary temporal `U`, `W`, `R`, `M` (right-associative, one level)
//! 4. `&` (left-associative)
//! 5. `|` (left-associative)
//! 6. `->` (right-associative)
//!
//! So `a & b U c` is `a & (b U c)`, `F a U b` is `(F a) U b` and
//! `a -> b -> c` is `a -> (b -> c)`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::trace::Vocabulary;

/// Top-level operator of a formula; the node type of a formula tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    True,
    Atom,
    Not,
    Next,
    Eventually,
    Globally,
    And,
    Or,
    Implies,
    Until,
    WeakUntil,
    Release,
    StrongRelease,
}

impl Kind {
    pub const ALL: [Kind; 13] = [
        Kind::True,
        Kind::Atom,
        Kind::Not,
        Kind::Next,
        Kind::Eventually,
        Kind::Globally,
        Kind::And,
        Kind::Or,
        Kind::Implies,
        Kind::Until,
        Kind::WeakUntil,
        Kind::Release,
        Kind::StrongRelease,
    ];

    pub fn arity(self) -> usize {
        match self {
            Kind::True | Kind::Atom => 0,
            Kind::Not | Kind::Next | Kind::Eventually | Kind::Globally => 1,
            _ => 2,
        }
    }

    /// Stable snake_case name used in dumps and reports.
    pub fn name(self) -> &'static str {
        match self {
            Kind::True => "true",
            Kind::Atom => "atom",
            Kind::Not => "not",
            Kind::Next => "next",
            Kind::Eventually => "eventually",
            Kind::Globally => "globally",
            Kind::And => "and",
            Kind::Or => "or",
            Kind::Implies => "implies",
            Kind::Until => "until",
            Kind::WeakUntil => "weak_until",
            Kind::Release => "release",
            Kind::StrongRelease => "strong_release",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnaryOp {
    Not,
    Next,
    Eventually,
    Globally,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Next => "X",
            UnaryOp::Eventually => "F",
            UnaryOp::Globally => "G",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
    Until,
    WeakUntil,
    Release,
    StrongRelease,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&",
            BinaryOp::Or => "|",
            BinaryOp::Implies => "->",
            BinaryOp::Until => "U",
            BinaryOp::WeakUntil => "W",
            BinaryOp::Release => "R",
            BinaryOp::StrongRelease => "M",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Implies => PREC_IMPLIES,
            BinaryOp::Or => PREC_OR,
            BinaryOp::And => PREC_AND,
            _ => PREC_TEMPORAL,
        }
    }

    fn right_associative(self) -> bool {
        !matches!(self, BinaryOp::And | BinaryOp::Or)
    }
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_TEMPORAL: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_PRIMARY: u8 = 6;

/// An LTL_f formula. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Unary(UnaryOp, Box<Formula>),
    Binary(BinaryOp, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn unary(op: UnaryOp, arg: Formula) -> Self {
        Formula::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(arg: Formula) -> Self {
        Self::unary(UnaryOp::Not, arg)
    }

    pub fn next(arg: Formula) -> Self {
        Self::unary(UnaryOp::Next, arg)
    }

    pub fn eventually(arg: Formula) -> Self {
        Self::unary(UnaryOp::Eventually, arg)
    }

    pub fn globally(arg: Formula) -> Self {
        Self::unary(UnaryOp::Globally, arg)
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::And, lhs, rhs)
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::Or, lhs, rhs)
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::Implies, lhs, rhs)
    }

    pub fn until(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::Until, lhs, rhs)
    }

    pub fn weak_until(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::WeakUntil, lhs, rhs)
    }

    pub fn release(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::Release, lhs, rhs)
    }

    pub fn strong_release(lhs: Formula, rhs: Formula) -> Self {
        Self::binary(BinaryOp::StrongRelease, lhs, rhs)
    }

    pub fn kind(&self) -> Kind {
        match self {
            Formula::True => Kind::True,
            Formula::Atom(_) => Kind::Atom,
            Formula::Unary(op, _) => match op {
                UnaryOp::Not => Kind::Not,
                UnaryOp::Next => Kind::Next,
                UnaryOp::Eventually => Kind::Eventually,
                UnaryOp::Globally => Kind::Globally,
            },
            Formula::Binary(op, _, _) => match op {
                BinaryOp::And => Kind::And,
                BinaryOp::Or => Kind::Or,
                BinaryOp::Implies => Kind::Implies,
                BinaryOp::Until => Kind::Until,
                BinaryOp::WeakUntil => Kind::WeakUntil,
                BinaryOp::Release => Kind::Release,
                BinaryOp::StrongRelease => Kind::StrongRelease,
            },
        }
    }

    /// The immediate subformulas bound by the top-level operator, left to right.
    pub fn arguments(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Atom(_) => Vec::new(),
            Formula::Unary(_, arg) => vec![arg.as_ref()],
            Formula::Binary(_, lhs, rhs) => vec![lhs.as_ref(), rhs.as_ref()],
        }
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Formula::Atom(name) => Some(name),
            _ => None,
        }
    }

    /// Tree height with the root at level 0.
    pub fn height(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Unary(_, arg) => 1 + arg.height(),
            Formula::Binary(_, lhs, rhs) => 1 + lhs.height().max(rhs.height()),
        }
    }

    /// Number of subformula occurrences (tree nodes).
    pub fn size(&self) -> usize {
        1 + self.arguments().iter().map(|a| a.size()).sum::<usize>()
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True => {}
            Formula::Atom(name) => {
                out.insert(name);
            }
            Formula::Unary(_, arg) => arg.collect_atoms(out),
            Formula::Binary(_, lhs, rhs) => {
                lhs.collect_atoms(out);
                rhs.collect_atoms(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::True | Formula::Atom(_) => PREC_PRIMARY,
            Formula::Unary(..) => PREC_UNARY,
            Formula::Binary(op, _, _) => op.precedence(),
        }
    }
}

/// Minimally parenthesized rendering; `parse(&f.to_string()) == Ok(f)`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(name) => f.write_str(name),
            Formula::Unary(op, arg) => {
                f.write_str(op.symbol())?;
                if arg.precedence() < PREC_UNARY {
                    write!(f, "({arg})")
                } else if *op == UnaryOp::Not {
                    write!(f, "{arg}")
                } else {
                    write!(f, " {arg}")
                }
            }
            Formula::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                let (wrap_lhs, wrap_rhs) = if op.right_associative() {
                    (lhs.precedence() <= p, rhs.precedence() < p)
                } else {
                    (lhs.precedence() < p, rhs.precedence() <= p)
                };
                write_operand(f, lhs, wrap_lhs)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, rhs, wrap_rhs)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, arg: &Formula, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({arg})")
    } else {
        write!(f, "{arg}")
    }
}

/// Render a formula back to specification text.
pub fn format(formula: &Formula) -> String {
    formula.to_string()
}

/// Which operand an operator is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Unexpected token or character. `position` is a byte offset.
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    /// Atom not declared in the supplied vocabulary.
    UnknownAtom { position: usize, name: String },
    /// An operator applied to the wrong number of operands.
    Arity {
        position: usize,
        operator: &'static str,
        missing: Operand,
    },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownAtom { position, .. }
            | ParseError::Arity { position, .. } => *position,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                position,
                expected,
                found,
            } => write!(
                f,
                "syntax error at {position}: expected {expected}, found {found}"
            ),
            ParseError::UnknownAtom { position, name } => {
                write!(f, "unknown atom `{name}` at {position}: not in the vocabulary")
            }
            ParseError::Arity {
                position,
                operator,
                missing,
            } => {
                let side = match missing {
                    Operand::Left => "left",
                    Operand::Right => "right",
                };
                write!(
                    f,
                    "syntax error at {position}: operator `{operator}` is missing its {side} operand"
                )
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// Parse a specification without a vocabulary check.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    Parser::new(text, None)?.parse_all()
}

/// Parse a specification, rejecting atoms outside `vocabulary`.
pub fn parse_with_vocabulary(text: &str, vocabulary: &Vocabulary) -> Result<Formula, ParseError> {
    Parser::new(text, Some(vocabulary))?.parse_all()
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

const RESERVED: [&str; 9] = ["X", "F", "G", "U", "W", "R", "M", "true", "false"];

/// Whether `name` is usable as an atom.
pub fn is_valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    True,
    Ident(String),
    Unary(UnaryOp),
    Binary(BinaryOp),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::True => "`true`".to_string(),
            Token::Ident(name) => alloc::format!("atom `{name}`"),
            Token::Unary(op) => alloc::format!("operator `{}`", op.symbol()),
            Token::Binary(op) => alloc::format!("operator `{}`", op.symbol()),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'!' => Token::Unary(UnaryOp::Not),
            b'&' => Token::Binary(BinaryOp::And),
            b'|' => Token::Binary(BinaryOp::Or),
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Token::Binary(BinaryOp::Implies)
                } else {
                    return Err(ParseError::Syntax {
                        position: start,
                        expected: "`->`".to_string(),
                        found: "`-`".to_string(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                match word {
                    "X" => Token::Unary(UnaryOp::Next),
                    "F" => Token::Unary(UnaryOp::Eventually),
                    "G" => Token::Unary(UnaryOp::Globally),
                    "U" => Token::Binary(BinaryOp::Until),
                    "W" => Token::Binary(BinaryOp::WeakUntil),
                    "R" => Token::Binary(BinaryOp::Release),
                    "M" => Token::Binary(BinaryOp::StrongRelease),
                    "true" => Token::True,
                    "false" => {
                        return Err(ParseError::Syntax {
                            position: start,
                            expected: "a formula (there is no `false` literal, write `!true`)".to_string(),
                            found: "`false`".to_string(),
                        })
                    }
                    _ => Token::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    expected: "an operator, atom or parenthesis".to_string(),
                    found: alloc::format!("`{ch}`"),
                });
            }
        };
        out.push((token, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    vocabulary: Option<&'a Vocabulary>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, vocabulary: Option<&'a Vocabulary>) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
            vocabulary,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), Token::describe)
    }

    fn parse_all(mut self) -> Result<Formula, ParseError> {
        let formula = self.parse_implies()?;
        match self.peek() {
            None => Ok(formula),
            Some(Token::RParen) => Err(ParseError::Syntax {
                position: self.position(),
                expected: "end of input".to_string(),
                found: "unbalanced `)`".to_string(),
            }),
            Some(_) => Err(ParseError::Syntax {
                position: self.position(),
                expected: "a binary operator or end of input".to_string(),
                found: self.found(),
            }),
        }
    }

    /// After consuming an operator, make sure something that can start a
    /// formula follows.
    fn expect_operand(&self, operator: &'static str, at: usize) -> Result<(), ParseError> {
        match self.peek() {
            None | Some(Token::RParen) | Some(Token::Binary(_)) => Err(ParseError::Arity {
                position: at,
                operator,
                missing: Operand::Right,
            }),
            _ => Ok(()),
        }
    }

    fn parse_implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        if let Some(Token::Binary(BinaryOp::Implies)) = self.peek() {
            let at = self.position();
            self.pos += 1;
            self.expect_operand(BinaryOp::Implies.symbol(), at)?;
            let rhs = self.parse_implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_left_assoc(
        &mut self,
        op: BinaryOp,
        next: fn(&mut Self) -> Result<Formula, ParseError>,
    ) -> Result<Formula, ParseError> {
        let mut lhs = next(self)?;
        while self.peek() == Some(&Token::Binary(op)) {
            let at = self.position();
            self.pos += 1;
            self.expect_operand(op.symbol(), at)?;
            let rhs = next(self)?;
            lhs = Formula::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        self.parse_left_assoc(BinaryOp::Or, Self::parse_and)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        self.parse_left_assoc(BinaryOp::And, Self::parse_temporal)
    }

    fn parse_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_unary()?;
        if let Some(&Token::Binary(op)) = self.peek() {
            if op.precedence() == PREC_TEMPORAL {
                let at = self.position();
                self.pos += 1;
                self.expect_operand(op.symbol(), at)?;
                let rhs = self.parse_temporal()?;
                return Ok(Formula::binary(op, lhs, rhs));
            }
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        if let Some(&Token::Unary(op)) = self.peek() {
            let at = self.position();
            self.pos += 1;
            self.expect_operand(op.symbol(), at)?;
            let arg = self.parse_unary()?;
            return Ok(Formula::unary(op, arg));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.position();
        match self.peek().cloned() {
            Some(Token::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Token::Ident(name)) => {
                if let Some(vocabulary) = self.vocabulary {
                    if !vocabulary.contains(&name) {
                        return Err(ParseError::UnknownAtom { position: at, name });
                    }
                }
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.parse_implies()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(ParseError::Syntax {
                        position: self.position(),
                        expected: "`)`".to_string(),
                        found: self.found(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Binary(op)) => Err(ParseError::Arity {
                position: at,
                operator: op.symbol(),
                missing: Operand::Left,
            }),
            _ => Err(ParseError::Syntax {
                position: at,
                expected: "a formula".to_string(),
                found: self.found(),
            }),
        }
    }
}
