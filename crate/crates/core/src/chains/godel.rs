//! The rational Gödel chains `Q_r` and `Q_p^γ`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::BlAlgebra;
use crate::numerics::Rational;

/// Length of the tail of `Q_p^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TailLen {
    Finite(u32),
    Omega,
}

impl TailLen {
    pub fn admits(self, index: u32) -> bool {
        match self {
            TailLen::Finite(n) => index < n,
            TailLen::Omega => true,
        }
    }
}

impl fmt::Display for TailLen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailLen::Finite(n) => write!(f, "{n}"),
            TailLen::Omega => f.write_str("omega"),
        }
    }
}

/// Elements are ordered `Rat(_) < Tail(_) < Top`; the derived order relies
/// on the variant order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GodelValue {
    Rat(Rational),
    Tail(u32),
    Top,
}

impl fmt::Display for GodelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GodelValue::Rat(q) => write!(f, "{q}"),
            GodelValue::Tail(i) => write!(f, "t{i}"),
            GodelValue::Top => f.write_str("1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GodelChainSpec {
    /// Rationals in `[0, r)` topped by 1.
    Qr { r: Rational },
    /// Rationals in `[0, p]`, tail points `t_0 < t_1 < ...`, then 1.
    Qpg { p: Rational, gamma: TailLen },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainSpecError {
    #[error("Q_r needs 0 < r <= 1, got {0}")]
    BadThreshold(Rational),
    #[error("Q_p^gamma needs 0 <= p < 1, got {0}")]
    BadPoint(Rational),
}

impl GodelChainSpec {
    pub fn qr(r: Rational) -> Result<Self, ChainSpecError> {
        if r.is_positive() && r <= Rational::one() {
            Ok(GodelChainSpec::Qr { r })
        } else {
            Err(ChainSpecError::BadThreshold(r))
        }
    }

    pub fn qpg(p: Rational, gamma: TailLen) -> Result<Self, ChainSpecError> {
        if !p.is_negative() && p < Rational::one() {
            Ok(GodelChainSpec::Qpg { p, gamma })
        } else {
            Err(ChainSpecError::BadPoint(p))
        }
    }

    /// The standard rational Gödel chain `Q_1`.
    pub fn standard() -> Self {
        GodelChainSpec::Qr { r: Rational::one() }
    }

    /// Whether the rational `q` is an element of the rational segment.
    pub fn has_rational(&self, q: &Rational) -> bool {
        if q.is_negative() {
            return false;
        }
        match self {
            GodelChainSpec::Qr { r } => q < r,
            GodelChainSpec::Qpg { p, .. } => q <= p,
        }
    }

    pub fn contains(&self, v: &GodelValue) -> bool {
        match (self, v) {
            (_, GodelValue::Top) => true,
            (_, GodelValue::Rat(q)) => self.has_rational(q),
            (GodelChainSpec::Qr { .. }, GodelValue::Tail(_)) => false,
            (GodelChainSpec::Qpg { gamma, .. }, GodelValue::Tail(i)) => gamma.admits(*i),
        }
    }

    pub fn interpret_constant(&self, q: &Rational) -> GodelValue {
        if self.has_rational(q) {
            GodelValue::Rat(q.clone())
        } else {
            GodelValue::Top
        }
    }
}

impl fmt::Display for GodelChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GodelChainSpec::Qr { r } => write!(f, "Qr {r}"),
            GodelChainSpec::Qpg { p, gamma } => write!(f, "Qpg {p} {gamma}"),
        }
    }
}

impl BlAlgebra for GodelChainSpec {
    type Value = GodelValue;

    fn zero(&self) -> GodelValue {
        GodelValue::Rat(Rational::zero())
    }

    fn one(&self) -> GodelValue {
        GodelValue::Top
    }

    fn constant(&self, q: &Rational) -> Option<GodelValue> {
        Some(self.interpret_constant(q))
    }

    fn contains(&self, v: &GodelValue) -> bool {
        GodelChainSpec::contains(self, v)
    }

    fn leq(&self, a: &GodelValue, b: &GodelValue) -> bool {
        a <= b
    }

    fn fuse(&self, a: &GodelValue, b: &GodelValue) -> GodelValue {
        a.min(b).clone()
    }

    fn imp(&self, a: &GodelValue, b: &GodelValue) -> GodelValue {
        if a <= b {
            GodelValue::Top
        } else {
            b.clone()
        }
    }
}
