//! Three-valued outcomes shared by the decision procedures.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<Y, N> {
    Yes(Y),
    No(N),
    Unknown(Exhausted),
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn yes(self) -> Option<Y> {
        match self {
            Verdict::Yes(y) => Some(y),
            _ => None,
        }
    }

    pub fn no(self) -> Option<N> {
        match self {
            Verdict::No(n) => Some(n),
            _ => None,
        }
    }

    /// Drops the witnesses, keeping only the outcome.
    pub fn outcome(&self) -> Outcome {
        match self {
            Verdict::Yes(_) => Outcome::Yes,
            Verdict::No(_) => Outcome::No,
            Verdict::Unknown(_) => Outcome::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

/// Work spent by a bounded search that ran out of budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Exhausted {
    pub tuples: u64,
    pub depth: u32,
    pub steps: u64,
}

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} tuples, depth {}, {} steps", self.tuples, self.depth, self.steps)
    }
}
