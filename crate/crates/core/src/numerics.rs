//! Exact arithmetic substrate: rationals, prime factorization, rational
//! n-th roots and the fair enumeration of `[0,1] ∩ Q` used by every
//! countermodel search.
//!
//! The value enumeration walks the Calkin–Wilf tree (equivalently, the
//! Stern–Brocot ordering by depth) restricted to the open interval, after
//! emitting `0` and `1`. A rational `a/b` in `(0,1)` sits at depth at most
//! `b - 1` of the left subtree, so every rational with denominator `<= d`
//! appears within the first [`prefix_length_for_denominator`]`(d)` outputs.
//!
//! Tuples are scheduled by *stages*: stage `m` contains, in lexicographic
//! order, every index tuple whose largest component is exactly `m`. Any
//! fixed tuple of values is therefore reached after finitely many steps, for
//! every arity, which is what makes the refuters limit-complete.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact normalized fraction. Truth values live in `[0,1]`; signed values
/// only show up as linear-constraint coefficients.
pub type Rational = BigRational;

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.numer().is_negative() && q <= &Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("malformed rational `{0}` (expected m/n or an integer)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `m/n` or a bare integer. Decimal and symbolic forms are rejected so
/// that only exactly representable thresholds get through.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    let malformed = || RationalParseError::Malformed(text.to_string());
    let parse_int = |s: &str| -> Result<BigInt, RationalParseError> {
        let s = s.trim();
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        BigInt::from_str(s).map_err(|_| malformed())
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(RationalParseError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// Multiplicative representation of a positive rational: prime ↦ nonzero
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimePowerVector(BTreeMap<u64, i64>);

impl PrimePowerVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn add_exponent(&mut self, p: u64, e: i64) {
        let slot = self.0.entry(p).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.0.remove(&p);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies the prime powers back out. `None` if any exponent is
    /// negative (the vector then denotes a proper fraction).
    pub fn to_integer(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for (p, e) in self.iter() {
            if e < 0 {
                return None;
            }
            acc *= BigUint::from(p).pow(e as u32);
        }
        Some(acc)
    }

    pub fn to_rational(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in self.iter() {
            let pow = BigInt::from(p).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= pow;
            } else {
                den *= pow;
            }
        }
        Rational::new(num, den)
    }
}

impl FromIterator<(u64, i64)> for PrimePowerVector {
    fn from_iter<T: IntoIterator<Item = (u64, i64)>>(iter: T) -> Self {
        let mut v = PrimePowerVector::new();
        for (p, e) in iter {
            v.add_exponent(p, e);
        }
        v
    }
}

/// Trial division with a 2·3·5 wheel. `factorize(1)` is the empty product.
///
/// Panics on `0`.
pub fn factorize(n: u64) -> PrimePowerVector {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut out = PrimePowerVector::new();
    let mut n = n;
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            out.add_exponent(p, 1);
            n /= p;
        }
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        while n % d == 0 {
            out.add_exponent(d, 1);
            n /= d;
        }
        d += WHEEL[i];
        i = (i + 1) % WHEEL.len();
    }
    if n > 1 {
        out.add_exponent(n, 1);
    }
    out
}

/// Exact integer n-th root if `x` is a perfect n-th power.
fn exact_integer_root(x: &BigInt, n: u32) -> Option<BigInt> {
    if let Some(small) = x.to_u64() {
        if small == 0 {
            return Some(BigInt::zero());
        }
        let f = factorize(small);
        if f.iter().all(|(_, e)| e % n as i64 == 0) {
            let root: PrimePowerVector = f.iter().map(|(p, e)| (p, e / n as i64)).collect();
            return root.to_integer().map(BigInt::from);
        }
        return None;
    }
    // Outside u64 the factorization route is too slow; fall back to an exact
    // integer root and check it.
    let r = x.nth_root(n);
    (r.pow(n) == *x).then_some(r)
}

/// The unique nonnegative rational `s` with `s^n = p`, if there is one.
///
/// Panics if `n == 0` or `p` is negative.
pub fn nth_root_rational(p: &Rational, n: u32) -> Option<Rational> {
    assert!(n >= 1, "root degree must be positive");
    assert!(!p.numer().is_negative(), "root of a negative rational");
    let num = exact_integer_root(p.numer(), n)?;
    let den = exact_integer_root(p.denom(), n)?;
    Some(Rational::new(num, den))
}

/// Unbounded enumeration of `[0,1] ∩ Q`: `0`, `1`, then the Calkin–Wilf
/// tree below `1` in breadth-first order (`1/2, 1/3, 2/3, 1/4, 3/5, ...`).
#[derive(Debug, Clone)]
pub struct UnitRationals {
    emitted_ends: u8,
    // Current Calkin–Wilf node a/b over the whole tree.
    a: u64,
    b: u64,
}

impl UnitRationals {
    pub fn new() -> Self {
        Self { emitted_ends: 0, a: 1, b: 1 }
    }
}

impl Default for UnitRationals {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for UnitRationals {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        match self.emitted_ends {
            0 => {
                self.emitted_ends = 1;
                return Some(Rational::zero());
            }
            1 => {
                self.emitted_ends = 2;
                return Some(Rational::one());
            }
            _ => {}
        }
        loop {
            // Newman's successor: x ↦ 1 / (2⌊x⌋ − x + 1).
            let (a, b) = (self.a, self.b);
            let floor = a / b;
            let num = b;
            let den = (2 * floor + 1) * b - a;
            self.a = num;
            self.b = den;
            if num < den {
                return Some(rat(num as i64, den as i64));
            }
        }
    }
}

/// First `budget` elements of the fixed enumeration of `[0,1] ∩ Q`.
pub fn enumerate_rationals(budget: usize) -> Vec<Rational> {
    UnitRationals::new().take(budget).collect()
}

/// Number of leading outputs of [`enumerate_rationals`] that is guaranteed to
/// contain every rational in `[0,1]` with denominator at most `d`.
pub fn prefix_length_for_denominator(d: u32) -> usize {
    // Depth of a/b in the Calkin–Wilf left subtree is at most b - 1, and the
    // subtree has 2^(k-1) nodes at depth k.
    if d <= 1 {
        return 2;
    }
    2 + (1usize << (d - 1)) - 1
}

/// The value enumeration with a list of preferred values moved to the
/// front. The result is still an injective enumeration of `[0,1] ∩ Q`.
#[derive(Debug, Clone)]
pub struct SeededRationals {
    seeds: Vec<Rational>,
    next_seed: usize,
    seen: HashSet<Rational>,
    rest: UnitRationals,
}

impl SeededRationals {
    pub fn new(seeds: impl IntoIterator<Item = Rational>) -> Self {
        let mut dedup = Vec::new();
        let mut seen = HashSet::new();
        for s in seeds {
            if in_unit_interval(&s) && seen.insert(s.clone()) {
                dedup.push(s);
            }
        }
        Self { seeds: dedup, next_seed: 0, seen, rest: UnitRationals::new() }
    }
}

impl Iterator for SeededRationals {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if self.next_seed < self.seeds.len() {
            self.next_seed += 1;
            return Some(self.seeds[self.next_seed - 1].clone());
        }
        self.rest.by_ref().find(|q| !self.seen.contains(q))
    }
}

/// Stage-ordered index tuples of a fixed arity: stage `m` lists, in
/// lexicographic order, every tuple over `0..=m` whose maximum is `m`.
#[derive(Debug, Clone)]
pub struct TupleSchedule {
    arity: usize,
    stage: usize,
    current: Vec<usize>,
    started: bool,
}

impl TupleSchedule {
    pub fn new(arity: usize) -> Self {
        Self { arity, stage: 0, current: vec![0; arity], started: false }
    }

    /// Advances `current` to the next tuple over `0..=stage` in lex order;
    /// returns false when the stage is exhausted.
    fn bump(&mut self) -> bool {
        for i in (0..self.arity).rev() {
            if self.current[i] < self.stage {
                self.current[i] += 1;
                for slot in &mut self.current[i + 1..] {
                    *slot = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for TupleSchedule {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        if self.arity == 0 {
            return None;
        }
        loop {
            if !self.bump() {
                self.stage += 1;
                self.current = vec![0; self.arity];
                // Smallest tuple of the new stage with max == stage.
                self.current[self.arity - 1] = self.stage;
                return Some(self.current.clone());
            }
            if self.current.contains(&self.stage) {
                return Some(self.current.clone());
            }
        }
    }
}

/// Rational tuples in schedule order, drawing values from `values` lazily.
pub struct RationalTuples<I: Iterator<Item = Rational>> {
    schedule: TupleSchedule,
    source: I,
    pool: Vec<Rational>,
}

impl<I: Iterator<Item = Rational>> RationalTuples<I> {
    pub fn new(arity: usize, source: I) -> Self {
        Self { schedule: TupleSchedule::new(arity), source, pool: Vec::new() }
    }
}

impl<I: Iterator<Item = Rational>> Iterator for RationalTuples<I> {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        let idx = self.schedule.next()?;
        let need = idx.iter().copied().max().map_or(0, |m| m + 1);
        while self.pool.len() < need {
            self.pool.push(self.source.next()?);
        }
        Some(idx.iter().map(|&i| self.pool[i].clone()).collect())
    }
}
