//! Term language over the BL signature with rational constants, together
//! with rules, equations and quasiequations.
//!
//! Formulas are immutable trees. `Zero` and `One` are the only
//! representations of the constants `c_0` and `c_1`; [`Formula::constant`]
//! canonicalizes, and every other constructor is structural.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One as _, Zero as _};

use crate::numerics::{in_unit_interval, Rational};

pub use parse::{desugar, parse_formula, parse_rule, parse_sugared, ParseError, ParseErrorKind, Sugared};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(u32),
    /// Rational constant strictly between 0 and 1 once canonicalized.
    Const(Rational),
    Zero,
    One,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Fuse(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("constant {0} lies outside [0,1]")]
pub struct ConstantOutOfRange(pub Rational);

impl Formula {
    pub fn var(index: u32) -> Self {
        Formula::Var(index)
    }

    /// `c_q`, mapped to `Zero`/`One` at the endpoints.
    pub fn constant(q: Rational) -> Result<Self, ConstantOutOfRange> {
        if !in_unit_interval(&q) {
            return Err(ConstantOutOfRange(q));
        }
        Ok(if q.is_zero() {
            Formula::Zero
        } else if q.is_one() {
            Formula::One
        } else {
            Formula::Const(q)
        })
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn fuse(a: Formula, b: Formula) -> Self {
        Formula::Fuse(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `¬a := a → 0`
    pub fn neg(a: Formula) -> Self {
        Formula::imp(a, Formula::Zero)
    }

    /// `a ↔ b := (a → b) · (b → a)`
    pub fn equiv(a: Formula, b: Formula) -> Self {
        Formula::fuse(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a^n`, right-nested: `a · (a · (... · a))`. Panics on `n == 0`.
    pub fn pow(a: Formula, n: u32) -> Self {
        assert!(n >= 1, "x^0 is not a formula");
        let mut acc = a.clone();
        for _ in 1..n {
            acc = Formula::fuse(a.clone(), acc);
        }
        acc
    }

    /// `a ⊕ b := ¬(¬a · ¬b)`
    pub fn oplus(a: Formula, b: Formula) -> Self {
        Formula::neg(Formula::fuse(Formula::neg(a), Formula::neg(b)))
    }

    /// Right-nested join of the given disjuncts; `Zero` for an empty list.
    pub fn join_all(mut items: Vec<Formula>) -> Self {
        let Some(mut acc) = items.pop() else {
            return Formula::Zero;
        };
        while let Some(next) = items.pop() {
            acc = Formula::or(next, acc);
        }
        acc
    }

    /// Leaves of the maximal `∨`-tree at the root, left to right.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Matches `(a → b) · (b → a)` and returns `(a, b)`.
    pub fn as_equiv(&self) -> Option<(&Formula, &Formula)> {
        let Formula::Fuse(l, r) = self else { return None };
        let (Formula::Imp(a, b), Formula::Imp(b2, a2)) = (&**l, &**r) else {
            return None;
        };
        (a == a2 && b == b2).then_some((&**a, &**b))
    }

    /// Reads the formula as a right-nested power `base^n` with maximal `n`.
    pub fn as_power(&self) -> (&Formula, u32) {
        if let Formula::Fuse(base, rest) = self {
            let mut n = 2;
            let mut cur: &Formula = rest;
            loop {
                if cur == &**base {
                    return (base, n);
                }
                match cur {
                    Formula::Fuse(b, r) if b == base => {
                        n += 1;
                        cur = r;
                    }
                    _ => break,
                }
            }
        }
        (self, 1)
    }

    /// Value of a constant leaf (`Zero`, `One`, `Const`).
    pub fn constant_value(&self) -> Option<Rational> {
        match self {
            Formula::Zero => Some(Rational::zero()),
            Formula::One => Some(Rational::one()),
            Formula::Const(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Fuse(a, b) | Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Var(i) = f {
                out.insert(*i);
            }
        });
        out
    }

    /// Payloads of the `Const` nodes (endpoints are not included).
    pub fn constants(&self) -> BTreeSet<Rational> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Const(q) = f {
                out.insert(q.clone());
            }
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        self.variables().is_empty()
    }

    pub fn has_constants(&self) -> bool {
        !self.constants().is_empty()
    }

    /// Number of binary connectives.
    pub fn connective_count(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.connective_count() + b.connective_count(),
            None => 0,
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        if let Some((a, b)) = self.children() {
            a.visit(f);
            b.visit(f);
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Var(i) => s.get(*i).cloned().unwrap_or_else(|| self.clone()),
            Formula::Const(_) | Formula::Zero | Formula::One => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(s), b.substitute(s)),
            Formula::Or(a, b) => Formula::or(a.substitute(s), b.substitute(s)),
            Formula::Fuse(a, b) => Formula::fuse(a.substitute(s), b.substitute(s)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(s), b.substitute(s)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Fuse(..) => 4,
            _ => 6,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, op, left_min, right_min) = match self {
            Formula::Var(i) => return write!(f, "x{i}"),
            Formula::Const(q) => return write!(f, "#{}/{}", q.numer(), q.denom()),
            Formula::Zero => return f.write_str("0"),
            Formula::One => return f.write_str("1"),
            // ∨, ∧, · associate to the left; → to the right.
            Formula::Or(a, b) => (a, b, "\\/", 2, 3),
            Formula::And(a, b) => (a, b, "/\\", 3, 4),
            Formula::Fuse(a, b) => (a, b, "*", 4, 5),
            Formula::Imp(a, b) => (a, b, "->", 2, 1),
        };
        a.write_child(f, left_min)?;
        write!(f, " {op} ")?;
        b.write_child(f, right_min)
    }
}

/// Finite map from variable indices to formulas; other variables are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution(BTreeMap<u32, Formula>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: u32, f: Formula) -> Self {
        self.0.insert(var, f);
        self
    }

    pub fn insert(&mut self, var: u32, f: Formula) {
        self.0.insert(var, f);
    }

    pub fn get(&self, var: u32) -> Option<&Formula> {
        self.0.get(&var)
    }

    /// `then ∘ self`: apply `self` first, then `then`.
    pub fn then(&self, then: &Substitution) -> Substitution {
        let mut out: BTreeMap<u32, Formula> = self.0.iter().map(|(&v, f)| (v, f.substitute(then))).collect();
        for (&v, f) in &then.0 {
            out.entry(v).or_insert_with(|| f.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(u32, Formula)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (u32, Formula)>>(iter: T) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// `premises ▷ conclusion`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Rule {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Self { premises, conclusion }
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut vars = self.conclusion.variables();
        for p in &self.premises {
            vars.extend(p.variables());
        }
        vars
    }

    pub fn constants(&self) -> BTreeSet<Rational> {
        let mut out = self.conclusion.constants();
        for p in &self.premises {
            out.extend(p.constants());
        }
        out
    }

    /// Algebraic translation: every formula `φ` becomes `φ ≈ 1`.
    pub fn to_quasiequation(&self) -> Quasiequation {
        Quasiequation {
            premises: self.premises.iter().map(|p| Equation::new(p.clone(), Formula::One)).collect(),
            conclusion: Equation::new(self.conclusion.clone(), Formula::One),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Rule {
        Rule {
            premises: self.premises.iter().map(|p| p.substitute(s)).collect(),
            conclusion: self.conclusion.substitute(s),
        }
    }
}

pub fn rule_to_quasiequation(rule: &Rule) -> Quasiequation {
    rule.to_quasiequation()
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Equation {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Self { lhs, rhs }
    }

    /// `φ ≈ 1`
    pub fn is_one(f: Formula) -> Self {
        Self::new(f, Formula::One)
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }

    pub fn constants(&self) -> BTreeSet<Rational> {
        let mut v = self.lhs.constants();
        v.extend(self.rhs.constants());
        v
    }

    pub fn substitute(&self, s: &Substitution) -> Equation {
        Equation::new(self.lhs.substitute(s), self.rhs.substitute(s))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `premises ⟹ conclusion` over equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quasiequation {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl Quasiequation {
    pub fn new(premises: Vec<Equation>, conclusion: Equation) -> Self {
        Self { premises, conclusion }
    }

    pub fn equations(&self) -> impl Iterator<Item = &Equation> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.equations().flat_map(Equation::variables).collect()
    }

    pub fn constants(&self) -> BTreeSet<Rational> {
        self.equations().flat_map(Equation::constants).collect()
    }

    pub fn is_constant_free(&self) -> bool {
        self.constants().is_empty()
    }
}

impl fmt::Display for Quasiequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}
