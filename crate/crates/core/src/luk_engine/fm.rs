//! Exact Fourier–Motzkin elimination over the rationals with strict and
//! non-strict inequalities and equalities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::numerics::Rational;

/// Affine form `Σ a_i x_i + c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<u32, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        Self { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: u32) -> Self {
        Self { coeffs: BTreeMap::from([(v, Rational::one())]), constant: Rational::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, v: u32) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, v: u32, a: &Rational) {
        let entry = self.coeffs.entry(v).or_insert_with(Rational::zero);
        *entry += a;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::default();
        }
        Self { coeffs: self.coeffs.iter().map(|(&v, a)| (v, a * k)).collect(), constant: &self.constant * k }
    }

    /// Replaces `v` by `e`.
    pub fn substitute(&self, v: u32, e: &LinExpr) -> Self {
        let a = self.coefficient(v);
        if a.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs.remove(&v);
        out + e.scale(&a)
    }

    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Rational {
        self.coeffs
            .iter()
            .map(|(v, a)| a * point.get(v).cloned().unwrap_or_else(Rational::zero))
            .fold(self.constant.clone(), |acc, t| acc + t)
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        for (v, a) in &rhs.coeffs {
            self.add_term(*v, a);
        }
        self.constant += rhs.constant;
        self
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self.scale(&-Rational::one())
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self + (-rhs)
    }
}

impl Mul<&Rational> for LinExpr {
    type Output = LinExpr;
    fn mul(self, k: &Rational) -> LinExpr {
        self.scale(k)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, a) in &self.coeffs {
            write!(f, "{a}*x{v} + ")?;
        }
        write!(f, "{}", self.constant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

/// `expr REL 0`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub expr: LinExpr,
    pub rel: Rel,
}

impl LinearConstraint {
    pub fn new(expr: LinExpr, rel: Rel) -> Self {
        Self { expr, rel }
    }

    /// `a ≤ b`
    pub fn le(a: LinExpr, b: LinExpr) -> Self {
        Self::new(a - b, Rel::Le)
    }

    /// `a < b`
    pub fn lt(a: LinExpr, b: LinExpr) -> Self {
        Self::new(a - b, Rel::Lt)
    }

    /// `a = b`
    pub fn eq(a: LinExpr, b: LinExpr) -> Self {
        Self::new(a - b, Rel::Eq)
    }

    pub fn holds_at(&self, point: &BTreeMap<u32, Rational>) -> bool {
        let v = self.expr.eval(point);
        match self.rel {
            Rel::Le => !v.is_positive(),
            Rel::Lt => v.is_negative(),
            Rel::Eq => v.is_zero(),
        }
    }

    fn ground_holds(&self) -> bool {
        self.holds_at(&BTreeMap::new())
    }

    /// Scales so that the first coefficient has absolute value 1.
    fn normalized(&self) -> Self {
        match self.expr.coeffs.values().next() {
            Some(a) => Self::new(self.expr.scale(&a.abs().recip()), self.rel),
            None => self.clone(),
        }
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        };
        write!(f, "{} {op} 0", self.expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FmResult {
    Sat(BTreeMap<u32, Rational>),
    Unsat,
}

impl FmResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, FmResult::Sat(_))
    }
}

enum Step {
    /// `v = expr` over later variables.
    Subst(u32, LinExpr),
    /// Bounds on `v`: each entry is `(bound, strict)`.
    Bounds { var: u32, lower: Vec<(LinExpr, bool)>, upper: Vec<(LinExpr, bool)> },
}

/// Keeps the tightest of parallel inequalities; `None` on a
/// violated ground constraint.
fn prune(cs: Vec<LinearConstraint>) -> Option<Vec<LinearConstraint>> {
    let mut best: BTreeMap<BTreeMap<u32, Rational>, (Rational, bool)> = BTreeMap::new();
    let mut eqs = BTreeSet::new();
    for c in cs {
        if c.expr.is_constant() {
            if !c.ground_holds() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        if c.rel == Rel::Eq {
            eqs.insert(c);
            continue;
        }
        let strict = c.rel == Rel::Lt;
        let entry = best.entry(c.expr.coeffs).or_insert((c.expr.constant.clone(), strict));
        // Larger constant is tighter for `Σ a x + c ≤ 0`.
        if c.expr.constant > entry.0 || (c.expr.constant == entry.0 && strict) {
            *entry = (c.expr.constant, strict);
        }
    }
    let mut out: Vec<LinearConstraint> = eqs.into_iter().collect();
    out.extend(best.into_iter().map(|(coeffs, (constant, strict))| {
        LinearConstraint::new(LinExpr { coeffs, constant }, if strict { Rel::Lt } else { Rel::Le })
    }));
    Some(out)
}

fn pick(lower: &[(Rational, bool)], upper: &[(Rational, bool)]) -> Rational {
    let two = Rational::from_integer(2.into());
    let max_lower = lower.iter().max_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let min_upper = upper.iter().min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    match (max_lower, min_upper) {
        (Some((l, _)), Some((u, _))) if l == u => l.clone(),
        (Some((l, _)), Some((u, _))) => (l + u) / two,
        (Some((l, strict)), None) => {
            if *strict {
                l + Rational::one()
            } else {
                l.clone()
            }
        }
        (None, Some((u, strict))) => {
            if *strict {
                u - Rational::one()
            } else {
                u.clone()
            }
        }
        (None, None) => Rational::zero(),
    }
}

/// Decides satisfiability over the rationals and returns a witness for
/// every variable occurring in the system.
pub fn fourier_motzkin(constraints: &[LinearConstraint]) -> FmResult {
    let vars: BTreeSet<u32> = constraints.iter().flat_map(|c| c.expr.coeffs.keys().copied()).collect();
    let Some(mut cs) = prune(constraints.to_vec()) else {
        return FmResult::Unsat;
    };
    let mut steps = Vec::new();

    while let Some(pos) = cs.iter().position(|c| c.rel == Rel::Eq) {
        let eq = cs.swap_remove(pos);
        let (&v, a) = eq.expr.coeffs.iter().next().expect("non-ground after pruning");
        let mut rest = eq.expr.clone();
        rest.coeffs.remove(&v);
        let def = rest.scale(&(-a.recip()));
        let substituted = cs.into_iter().map(|c| LinearConstraint::new(c.expr.substitute(v, &def), c.rel)).collect();
        steps.push(Step::Subst(v, def));
        let Some(next) = prune(substituted) else {
            return FmResult::Unsat;
        };
        cs = next;
    }

    loop {
        let live: BTreeSet<u32> = cs.iter().flat_map(|c| c.expr.coeffs.keys().copied()).collect();
        // Eliminate the variable producing the fewest combinations.
        let Some(v) = live.into_iter().min_by_key(|&v| {
            let pos = cs.iter().filter(|c| c.expr.coefficient(v).is_positive()).count();
            let neg = cs.iter().filter(|c| c.expr.coefficient(v).is_negative()).count();
            pos * neg
        }) else {
            break;
        };
        let (mut lower, mut upper, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for c in cs {
            let a = c.expr.coefficient(v);
            if a.is_zero() {
                keep.push(c);
                continue;
            }
            // a·v + r REL 0  ⇔  v REL' −r/a
            let mut r = c.expr.clone();
            r.coeffs.remove(&v);
            let bound = r.scale(&(-a.recip()));
            let strict = c.rel == Rel::Lt;
            if a.is_positive() {
                upper.push((bound, strict));
            } else {
                lower.push((bound, strict));
            }
        }
        for (l, ls) in &lower {
            for (u, us) in &upper {
                let rel = if *ls || *us { Rel::Lt } else { Rel::Le };
                keep.push(LinearConstraint::new(l.clone() - u.clone(), rel));
            }
        }
        steps.push(Step::Bounds { var: v, lower, upper });
        let Some(next) = prune(keep) else {
            return FmResult::Unsat;
        };
        cs = next;
    }

    let mut point = BTreeMap::new();
    for step in steps.iter().rev() {
        match step {
            Step::Subst(v, def) => {
                let value = def.eval(&point);
                point.insert(*v, value);
            }
            Step::Bounds { var, lower, upper } => {
                let ev = |bs: &Vec<(LinExpr, bool)>| -> Vec<(Rational, bool)> {
                    bs.iter().map(|(e, s)| (e.eval(&point), *s)).collect()
                };
                let value = pick(&ev(lower), &ev(upper));
                point.insert(*var, value);
            }
        }
    }
    for v in vars {
        point.entry(v).or_insert_with(Rational::zero);
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&point)));
    FmResult::Sat(point)
}
