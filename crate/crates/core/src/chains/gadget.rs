//! The algebras `A_X`: product-algebra powers indexed by a finite prime set
//! `X`, evaluated on exact `SqrtRational` components, together with the
//! formulas `Γ_X` and `Δ_X`.

use std::collections::{BTreeMap, BTreeSet};

use super::{evaluate, BlAlgebra, EvalError, SqrtRational};
use crate::formula::Formula;
use crate::numerics::{factorize, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetAlgebra {
    primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("the prime set is empty")]
    EmptyPrimeSet,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p).iter().eq([(p, 1)])
}

impl GadgetAlgebra {
    pub fn new(primes: &BTreeSet<u64>) -> Result<Self, GadgetError> {
        if primes.is_empty() {
            return Err(GadgetError::EmptyPrimeSet);
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(GadgetError::NotPrime(p));
        }
        Ok(Self { primes: primes.iter().copied().collect() })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The generator `p ↦ 1/√p`.
    pub fn inv_x(&self) -> Vec<SqrtRational> {
        self.primes.iter().map(|&p| SqrtRational::inv_sqrt(p)).collect()
    }

    pub fn constant_vector(&self, q: &Rational) -> Vec<SqrtRational> {
        vec![SqrtRational::from_rational(q.clone()); self.primes.len()]
    }

    fn zip(
        a: &[SqrtRational],
        b: &[SqrtRational],
        op: impl Fn(&SqrtRational, &SqrtRational) -> SqrtRational,
    ) -> Vec<SqrtRational> {
        a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
    }
}

fn product_imp(x: &SqrtRational, y: &SqrtRational) -> SqrtRational {
    if x <= y {
        SqrtRational::one()
    } else {
        y.div(x)
    }
}

impl BlAlgebra for GadgetAlgebra {
    type Value = Vec<SqrtRational>;

    fn zero(&self) -> Self::Value {
        vec![SqrtRational::zero(); self.primes.len()]
    }

    fn one(&self) -> Self::Value {
        vec![SqrtRational::one(); self.primes.len()]
    }

    fn constant(&self, q: &Rational) -> Option<Self::Value> {
        Some(self.constant_vector(q))
    }

    fn contains(&self, v: &Self::Value) -> bool {
        v.len() == self.primes.len() && v.iter().all(|x| *x <= SqrtRational::one())
    }

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::zip(a, b, |x, y| x.min(y).clone())
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::zip(a, b, |x, y| x.max(y).clone())
    }

    fn fuse(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::zip(a, b, SqrtRational::mul)
    }

    fn imp(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::zip(a, b, product_imp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetEvalError {
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Componentwise evaluation in `A_X`; assignment vectors are ordered like `X`.
pub fn eval_in_ax(
    f: &Formula,
    x: &BTreeSet<u64>,
    a: &BTreeMap<u32, Vec<SqrtRational>>,
) -> Result<Vec<SqrtRational>, GadgetEvalError> {
    let alg = GadgetAlgebra::new(x)?;
    Ok(evaluate(&alg, f, &|v| a.get(&v).cloned())?)
}

/// `⋁_{p∈X} (z² ↔ c_{1/p})`, and `0` for empty `X`.
pub fn gamma_formula(x: &BTreeSet<u64>, z: u32) -> Formula {
    let z2 = Formula::pow(Formula::Var(z), 2);
    Formula::join_all(
        x.iter()
            .map(|&p| {
                let c = Formula::constant(Rational::new(1.into(), p.into())).expect("1/p in [0,1]");
                Formula::equiv(z2.clone(), c)
            })
            .collect(),
    )
}

/// `Γ_X(z)` together with `Γ_{X∖{p}}(z)` for each `p ∈ X`.
pub fn delta_formula(x: &BTreeSet<u64>, z: u32) -> (Formula, Vec<Formula>) {
    let others = x
        .iter()
        .map(|p| {
            let mut rest = x.clone();
            rest.remove(p);
            gamma_formula(&rest, z)
        })
        .collect();
    (gamma_formula(x, z), others)
}

/// Whether `Δ_X(value)` holds in `A_X`: `Γ_X` evaluates to 1 and every
/// `Γ_{X∖{p}}` does not.
pub fn delta_holds(alg: &GadgetAlgebra, value: &[SqrtRational]) -> Result<bool, EvalError> {
    let x: BTreeSet<u64> = alg.primes.iter().copied().collect();
    let (gamma, others) = delta_formula(&x, 0);
    let one = alg.one();
    let assign = |v: u32| (v == 0).then(|| value.to_vec());
    if evaluate(alg, &gamma, &assign)? != one {
        return Ok(false);
    }
    for g in &others {
        if evaluate(alg, g, &assign)? == one {
            return Ok(false);
        }
    }
    Ok(true)
}
