//! Concrete syntax.
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("\/" and)*
//! and     := fuse ("/\" fuse)*
//! fuse    := atom ("*" atom)*
//! atom    := unary (("<->" | "(+)") unary)*
//! unary   := "~" unary | postfix
//! postfix := primary ("^" int)*
//! primary := "0" | "1" | "#" int "/" int | "x" int | "(" formula ")"
//! rule    := (formula ("," formula)*)? "|-" formula
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero as _;

use super::{Formula, Rule};
use crate::numerics::{in_unit_interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("constant {0} is out of range [0,1]")]
    OutOfRange(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exponent 0 is not allowed")]
    ZeroExponent,
    #[error("integer {0} is too large")]
    IntegerTooLarge(String),
    #[error("bare integer {0} (only 0 and 1 are formulas)")]
    BareInteger(String),
}

/// Surface syntax before abbreviations are expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sugared {
    Var(u32),
    Const(Rational),
    Zero,
    One,
    And(Box<Sugared>, Box<Sugared>),
    Or(Box<Sugared>, Box<Sugared>),
    Fuse(Box<Sugared>, Box<Sugared>),
    Imp(Box<Sugared>, Box<Sugared>),
    Neg(Box<Sugared>),
    Equiv(Box<Sugared>, Box<Sugared>),
    Pow(Box<Sugared>, u32),
    OPlus(Box<Sugared>, Box<Sugared>),
}

impl From<Formula> for Sugared {
    fn from(f: Formula) -> Self {
        let b = |x: Box<Formula>| Box::new(Sugared::from(*x));
        match f {
            Formula::Var(i) => Sugared::Var(i),
            Formula::Const(q) => Sugared::Const(q),
            Formula::Zero => Sugared::Zero,
            Formula::One => Sugared::One,
            Formula::And(x, y) => Sugared::And(b(x), b(y)),
            Formula::Or(x, y) => Sugared::Or(b(x), b(y)),
            Formula::Fuse(x, y) => Sugared::Fuse(b(x), b(y)),
            Formula::Imp(x, y) => Sugared::Imp(b(x), b(y)),
        }
    }
}

/// Expands `~`, `<->`, `^n` and `(+)` into the core connectives.
pub fn desugar(s: &Sugared) -> Result<Formula, ParseErrorKind> {
    Ok(match s {
        Sugared::Var(i) => Formula::Var(*i),
        Sugared::Const(q) => Formula::constant(q.clone()).map_err(|e| ParseErrorKind::OutOfRange(e.0.to_string()))?,
        Sugared::Zero => Formula::Zero,
        Sugared::One => Formula::One,
        Sugared::And(a, b) => Formula::and(desugar(a)?, desugar(b)?),
        Sugared::Or(a, b) => Formula::or(desugar(a)?, desugar(b)?),
        Sugared::Fuse(a, b) => Formula::fuse(desugar(a)?, desugar(b)?),
        Sugared::Imp(a, b) => Formula::imp(desugar(a)?, desugar(b)?),
        Sugared::Neg(a) => Formula::neg(desugar(a)?),
        Sugared::Equiv(a, b) => Formula::equiv(desugar(a)?, desugar(b)?),
        Sugared::Pow(_, 0) => return Err(ParseErrorKind::ZeroExponent),
        Sugared::Pow(a, n) => Formula::pow(desugar(a)?, *n),
        Sugared::OPlus(a, b) => Formula::oplus(desugar(a)?, desugar(b)?),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Hash,
    Slash,
    Int(BigInt),
    Var(u32),
    Star,
    Arrow,
    Equiv,
    OPlus,
    And,
    Or,
    Tilde,
    Caret,
    Comma,
    Turnstile,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Hash => "'#'",
            Tok::Slash => "'/'",
            Tok::Int(n) => return write!(f, "integer {n}"),
            Tok::Var(i) => return write!(f, "variable x{i}"),
            Tok::Star => "'*'",
            Tok::Arrow => "'->'",
            Tok::Equiv => "'<->'",
            Tok::OPlus => "'(+)'",
            Tok::And => "'/\\'",
            Tok::Or => "'\\/'",
            Tok::Tilde => "'~'",
            Tok::Caret => "'^'",
            Tok::Comma => "','",
            Tok::Turnstile => "'|-'",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    const SYMBOLS: [(&str, Tok); 13] = [
        ("(+)", Tok::OPlus),
        ("<->", Tok::Equiv),
        ("->", Tok::Arrow),
        ("/\\", Tok::And),
        ("\\/", Tok::Or),
        ("|-", Tok::Turnstile),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        ("#", Tok::Hash),
        ("/", Tok::Slash),
        ("*", Tok::Star),
        ("~", Tok::Tilde),
        ("^", Tok::Caret),
    ];
    let mut out = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().expect("non-empty");
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        if c == ',' {
            out.push((pos, Tok::Comma));
            pos += 1;
            continue;
        }
        for (sym, tok) in &SYMBOLS {
            if rest.starts_with(sym) {
                out.push((pos, tok.clone()));
                pos += sym.len();
                continue 'outer;
            }
        }
        let digits = |s: &str| s.bytes().take_while(u8::is_ascii_digit).count();
        if c.is_ascii_digit() {
            let len = digits(rest);
            let n: BigInt = rest[..len].parse().expect("ascii digits");
            out.push((pos, Tok::Int(n)));
            pos += len;
            continue;
        }
        if c == 'x' {
            let len = digits(&rest[1..]);
            if len == 0 {
                return Err(ParseError { position: pos, kind: ParseErrorKind::UnexpectedChar(c) });
            }
            let digits_str = &rest[1..1 + len];
            let index = digits_str.parse::<u32>().map_err(|_| ParseError {
                position: pos,
                kind: ParseErrorKind::IntegerTooLarge(digits_str.to_string()),
            })?;
            out.push((pos, Tok::Var(index)));
            pos += 1 + len;
            continue;
        }
        return Err(ParseError { position: pos, kind: ParseErrorKind::UnexpectedChar(c) });
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn position(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            position: self.position(),
            kind: ParseErrorKind::Unexpected { expected, found: self.peek().to_string() },
        }
    }

    fn expect(&mut self, t: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn formula(&mut self) -> Result<Sugared, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Sugared::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn left_assoc(
        &mut self,
        op: Tok,
        next: fn(&mut Self) -> Result<Sugared, ParseError>,
        build: fn(Box<Sugared>, Box<Sugared>) -> Sugared,
    ) -> Result<Sugared, ParseError> {
        let mut acc = next(self)?;
        while self.eat(&op) {
            let rhs = next(self)?;
            acc = build(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn or(&mut self) -> Result<Sugared, ParseError> {
        self.left_assoc(Tok::Or, Self::and, Sugared::Or)
    }

    fn and(&mut self) -> Result<Sugared, ParseError> {
        self.left_assoc(Tok::And, Self::fuse, Sugared::And)
    }

    fn fuse(&mut self) -> Result<Sugared, ParseError> {
        self.left_assoc(Tok::Star, Self::atom, Sugared::Fuse)
    }

    fn atom(&mut self) -> Result<Sugared, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Equiv) {
                acc = Sugared::Equiv(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(&Tok::OPlus) {
                acc = Sugared::OPlus(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Sugared, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Sugared::Neg(Box::new(self.unary()?)));
        }
        let mut acc = self.primary()?;
        while self.eat(&Tok::Caret) {
            let pos = self.position();
            let n = self.int("exponent")?;
            let n = u32::try_from(&n)
                .map_err(|_| ParseError { position: pos, kind: ParseErrorKind::IntegerTooLarge(n.to_string()) })?;
            if n == 0 {
                return Err(ParseError { position: pos, kind: ParseErrorKind::ZeroExponent });
            }
            acc = Sugared::Pow(Box::new(acc), n);
        }
        Ok(acc)
    }

    fn int(&mut self, expected: &'static str) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn primary(&mut self) -> Result<Sugared, ParseError> {
        let pos = self.position();
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Sugared::Var(i))
            }
            Tok::Int(n) => {
                self.bump();
                if n.is_zero() {
                    Ok(Sugared::Zero)
                } else if n == BigInt::from(1) {
                    Ok(Sugared::One)
                } else {
                    Err(ParseError { position: pos, kind: ParseErrorKind::BareInteger(n.to_string()) })
                }
            }
            Tok::Hash => {
                self.bump();
                let num = self.int("numerator")?;
                self.expect(Tok::Slash, "'/'")?;
                let den = self.int("denominator")?;
                if den.is_zero() {
                    return Err(ParseError { position: pos, kind: ParseErrorKind::ZeroDenominator });
                }
                let q = Rational::new(num, den);
                if !in_unit_interval(&q) {
                    return Err(ParseError { position: pos, kind: ParseErrorKind::OutOfRange(q.to_string()) });
                }
                Ok(match Formula::constant(q.clone()).expect("range checked") {
                    Formula::Zero => Sugared::Zero,
                    Formula::One => Sugared::One,
                    _ => Sugared::Const(q),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn finish(text: &str, inner: &Sugared, p: &Parser) -> Result<Formula, ParseError> {
    desugar(inner).map_err(|kind| ParseError { position: text.len().min(p.position()), kind })
}

/// Parses surface syntax without expanding abbreviations.
pub fn parse_sugared(text: &str) -> Result<Sugared, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let s = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(s)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let s = parse_sugared(text)?;
    desugar(&s).map_err(|kind| ParseError { position: 0, kind })
}

/// Parses `g1, g2 |- f` (or `|- f` for no premises).
pub fn parse_rule(text: &str) -> Result<Rule, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut premises = Vec::new();
    if !p.eat(&Tok::Turnstile) {
        loop {
            let s = p.formula()?;
            premises.push(finish(text, &s, &p)?);
            if p.eat(&Tok::Turnstile) {
                break;
            }
            p.expect(Tok::Comma, "',' or '|-'")?;
        }
    }
    let s = p.formula()?;
    let conclusion = finish(text, &s, &p)?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(Rule::new(premises, conclusion))
}
