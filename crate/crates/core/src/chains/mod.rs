//! Exact evaluators for the concrete algebras: rational Łukasiewicz and
//! product chains, their constant-trivialized variants, finite MV chains,
//! rational Gödel chains and the gadget algebras `A_X`.

mod gadget;
mod godel;
mod sqrt;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::formula::Formula;
use crate::numerics::{in_unit_interval, Rational};

pub use gadget::{
    delta_formula, delta_holds, eval_in_ax, gamma_formula, is_prime, GadgetAlgebra, GadgetError, GadgetEvalError,
};
pub use godel::{ChainSpecError, GodelChainSpec, GodelValue, TailLen};
pub use sqrt::SqrtRational;
pub use table::{
    check_bookkeeping, check_bookkeeping_algebra, BookkeepingEquation, Flavor, InterpretationTable, TableError,
    Violation,
};

/// An algebra in the BL signature with rational constants. For chains the
/// default lattice operations are the order min and max.
pub trait BlAlgebra {
    type Value: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    /// Interpretation of `c_q`, or `None` when the algebra has none.
    fn constant(&self, q: &Rational) -> Option<Self::Value>;
    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn fuse(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn imp(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn contains(&self, _v: &Self::Value) -> bool {
        true
    }

    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        if self.leq(a, b) {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        if self.leq(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable x{0} is not assigned")]
    UnassignedVariable(u32),
    #[error("value of x{0} is not an element of the algebra")]
    OutOfCarrier(u32),
    #[error("constant {0} has no interpretation")]
    UninterpretedConstant(Rational),
    #[error("formula contains constants")]
    ConstantPresent,
}

pub fn evaluate<A: BlAlgebra + ?Sized>(
    alg: &A,
    f: &Formula,
    lookup: &dyn Fn(u32) -> Option<A::Value>,
) -> Result<A::Value, EvalError> {
    Ok(match f {
        Formula::Var(i) => {
            let v = lookup(*i).ok_or(EvalError::UnassignedVariable(*i))?;
            if !alg.contains(&v) {
                return Err(EvalError::OutOfCarrier(*i));
            }
            v
        }
        Formula::Const(q) => alg.constant(q).ok_or_else(|| EvalError::UninterpretedConstant(q.clone()))?,
        Formula::Zero => alg.zero(),
        Formula::One => alg.one(),
        Formula::And(a, b) => alg.meet(&evaluate(alg, a, lookup)?, &evaluate(alg, b, lookup)?),
        Formula::Or(a, b) => alg.join(&evaluate(alg, a, lookup)?, &evaluate(alg, b, lookup)?),
        Formula::Fuse(a, b) => alg.fuse(&evaluate(alg, a, lookup)?, &evaluate(alg, b, lookup)?),
        Formula::Imp(a, b) => alg.imp(&evaluate(alg, a, lookup)?, &evaluate(alg, b, lookup)?),
    })
}

/// Evaluates with a map-backed assignment.
pub fn evaluate_map<A: BlAlgebra + ?Sized>(
    alg: &A,
    f: &Formula,
    a: &BTreeMap<u32, A::Value>,
) -> Result<A::Value, EvalError> {
    evaluate(alg, f, &|v| a.get(&v).cloned())
}

/// `[0,1] ∩ Q` with Łukasiewicz operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LukasiewiczQ;

/// `[0,1] ∩ Q` with product operations and constants interpreted as themselves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProductQ;

/// `[0,1] ∩ Q` with product operations and every `c_q` with `q > 0` sent to 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrivializedProductQ;

/// The two-element chain with `c_q = 1` for `q > 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BooleanTrivial;

/// The MV chain `Ł_{n+1}` on indices `0..=n`, index `k` meaning `k/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteMv {
    pub n: u32,
}

fn product_imp(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        Rational::one()
    } else {
        b / a
    }
}

impl BlAlgebra for LukasiewiczQ {
    type Value = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn constant(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }
    fn contains(&self, v: &Rational) -> bool {
        in_unit_interval(v)
    }
    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
    fn fuse(&self, a: &Rational, b: &Rational) -> Rational {
        (a + b - Rational::one()).max(Rational::zero())
    }
    fn imp(&self, a: &Rational, b: &Rational) -> Rational {
        (Rational::one() - a + b).min(Rational::one())
    }
}

impl BlAlgebra for ProductQ {
    type Value = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn constant(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }
    fn contains(&self, v: &Rational) -> bool {
        in_unit_interval(v)
    }
    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
    fn fuse(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn imp(&self, a: &Rational, b: &Rational) -> Rational {
        product_imp(a, b)
    }
}

impl BlAlgebra for TrivializedProductQ {
    type Value = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn constant(&self, q: &Rational) -> Option<Rational> {
        Some(if q.is_positive() { Rational::one() } else { Rational::zero() })
    }
    fn contains(&self, v: &Rational) -> bool {
        in_unit_interval(v)
    }
    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
    fn fuse(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn imp(&self, a: &Rational, b: &Rational) -> Rational {
        product_imp(a, b)
    }
}

impl BlAlgebra for BooleanTrivial {
    type Value = bool;

    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn constant(&self, q: &Rational) -> Option<bool> {
        Some(q.is_positive())
    }
    fn leq(&self, a: &bool, b: &bool) -> bool {
        a <= b
    }
    fn fuse(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn imp(&self, a: &bool, b: &bool) -> bool {
        !*a || *b
    }
}

impl BlAlgebra for FiniteMv {
    type Value = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        self.n
    }
    /// Defined only for grid points `k/n`.
    fn constant(&self, q: &Rational) -> Option<u32> {
        let scaled = q * Rational::from_integer(BigInt::from(self.n));
        if !in_unit_interval(q) || !scaled.is_integer() {
            return None;
        }
        u32::try_from(scaled.to_integer()).ok()
    }
    fn contains(&self, v: &u32) -> bool {
        *v <= self.n
    }
    fn leq(&self, a: &u32, b: &u32) -> bool {
        a <= b
    }
    fn fuse(&self, a: &u32, b: &u32) -> u32 {
        (a + b).saturating_sub(self.n)
    }
    fn imp(&self, a: &u32, b: &u32) -> u32 {
        (self.n + b).saturating_sub(*a).min(self.n)
    }
}

pub fn eval_luk_rational(f: &Formula, a: &BTreeMap<u32, Rational>) -> Result<Rational, EvalError> {
    evaluate_map(&LukasiewiczQ, f, a)
}

pub fn eval_product_rational(f: &Formula, a: &BTreeMap<u32, Rational>) -> Result<Rational, EvalError> {
    evaluate_map(&ProductQ, f, a)
}

/// Evaluation in `Ł_{n+1}`; constants must have been eliminated first.
pub fn eval_finite_mv(f: &Formula, n: u32, a: &BTreeMap<u32, u32>) -> Result<u32, EvalError> {
    if f.has_constants() {
        return Err(EvalError::ConstantPresent);
    }
    evaluate_map(&FiniteMv { n }, f, a)
}

pub fn eval_godel(f: &Formula, chain: &GodelChainSpec, a: &BTreeMap<u32, GodelValue>) -> Result<GodelValue, EvalError> {
    evaluate_map(chain, f, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::tests::arb_formula;
    use crate::numerics::rat;
    use proptest::prelude::*;
    use proptest::strategy::ValueTree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(n: i64, d: i64) -> Formula {
        Formula::constant(rat(n, d)).unwrap()
    }

    #[test]
    fn luk_examples() {
        let none = BTreeMap::new();
        assert_eq!(eval_luk_rational(&Formula::fuse(c(1, 2), c(3, 4)), &none).unwrap(), rat(1, 4));
        assert_eq!(eval_luk_rational(&Formula::imp(c(3, 4), c(1, 2)), &none).unwrap(), rat(3, 4));
        let a = BTreeMap::from([(1, rat(2, 7))]);
        let x = Formula::Var(1);
        assert_eq!(eval_luk_rational(&Formula::imp(x.clone(), x), &a).unwrap(), rat(1, 1));
        assert_eq!(eval_luk_rational(&Formula::Var(2), &a), Err(EvalError::UnassignedVariable(2)));
    }

    #[test]
    fn product_examples() {
        let none = BTreeMap::new();
        assert_eq!(eval_product_rational(&Formula::fuse(c(1, 2), c(1, 3)), &none).unwrap(), rat(1, 6));
        assert_eq!(eval_product_rational(&Formula::imp(c(1, 2), c(1, 3)), &none).unwrap(), rat(2, 3));
        assert_eq!(eval_product_rational(&Formula::imp(Formula::Zero, Formula::Zero), &none).unwrap(), rat(1, 1));
    }

    #[test]
    fn finite_mv_examples() {
        let a = BTreeMap::from([(1, 1)]);
        let x = Formula::Var(1);
        assert_eq!(eval_finite_mv(&Formula::fuse(x.clone(), x.clone()), 2, &a).unwrap(), 0);
        assert_eq!(eval_finite_mv(&c(1, 2), 2, &a), Err(EvalError::ConstantPresent));
        // n = 1 is the Boolean chain.
        for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let a = BTreeMap::from([(1, p), (2, q)]);
            let imp = Formula::imp(Formula::Var(1), Formula::Var(2));
            let fuse = Formula::fuse(Formula::Var(1), Formula::Var(2));
            assert_eq!(eval_finite_mv(&imp, 1, &a).unwrap() == 1, p == 0 || q == 1);
            assert_eq!(eval_finite_mv(&fuse, 1, &a).unwrap() == 1, p == 1 && q == 1);
        }
    }

    #[test]
    fn finite_mv_agrees_with_rational_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let strategy = arb_formula().prop_filter("constant-free", |f| !f.has_constants());
        for _ in 0..1000 {
            let f = strategy.new_tree(&mut runner).unwrap().current();
            let n = rng.gen_range(1..9u32);
            let idx: BTreeMap<u32, u32> = (0..4).map(|v| (v, rng.gen_range(0..=n))).collect();
            let vals: BTreeMap<u32, Rational> = idx.iter().map(|(&v, &k)| (v, rat(k as i64, n as i64))).collect();
            let got = eval_finite_mv(&f, n, &idx).unwrap();
            assert_eq!(rat(got as i64, n as i64), eval_luk_rational(&f, &vals).unwrap(), "{f}");
        }
    }

    #[test]
    fn godel_examples() {
        let none = BTreeMap::new();
        let qr = GodelChainSpec::qr(rat(1, 4)).unwrap();
        assert_eq!(eval_godel(&c(1, 2), &qr, &none).unwrap(), GodelValue::Top);
        let qp = GodelChainSpec::qpg(rat(1, 2), TailLen::Finite(2)).unwrap();
        let a = BTreeMap::from([(1, GodelValue::Tail(1))]);
        let f = Formula::imp(Formula::Var(1), c(1, 2));
        assert_eq!(eval_godel(&f, &qp, &a).unwrap(), GodelValue::Rat(rat(1, 2)));
        for v in [GodelValue::Rat(rat(1, 3)), GodelValue::Tail(0), GodelValue::Top] {
            let a = BTreeMap::from([(1, v)]);
            let f = Formula::imp(Formula::Var(1), Formula::One);
            assert_eq!(eval_godel(&f, &qp, &a).unwrap(), GodelValue::Top);
        }
        let bad = BTreeMap::from([(1, GodelValue::Tail(2))]);
        assert_eq!(eval_godel(&Formula::Var(1), &qp, &bad), Err(EvalError::OutOfCarrier(1)));
        let bad = BTreeMap::from([(1, GodelValue::Rat(rat(1, 4)))]);
        assert!(eval_godel(&Formula::Var(1), &qr, &bad).is_err());
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
        let d = rng.gen_range(1..13);
        rat(rng.gen_range(0..=d), d)
    }

    fn random_godel(rng: &mut ChaCha8Rng, chain: &GodelChainSpec) -> GodelValue {
        loop {
            let v = match rng.gen_range(0..4) {
                0 => GodelValue::Top,
                1 => GodelValue::Tail(rng.gen_range(0..3)),
                _ => GodelValue::Rat(random_unit(rng)),
            };
            if chain.contains(&v) {
                return v;
            }
        }
    }

    fn random_sqrt(rng: &mut ChaCha8Rng) -> SqrtRational {
        let base = SqrtRational::from_rational(random_unit(rng));
        match rng.gen_range(0..3) {
            0 => base,
            1 => base.mul(&SqrtRational::inv_sqrt(2)),
            _ => base.mul(&SqrtRational::inv_sqrt(3)),
        }
    }

    /// Residuation, prelinearity and divisibility on random triples.
    fn check_bl_laws<A: BlAlgebra>(alg: &A, mut sample: impl FnMut() -> A::Value, trials: usize) {
        let one = alg.one();
        for _ in 0..trials {
            let (a, b, c) = (sample(), sample(), sample());
            assert_eq!(
                alg.leq(&alg.fuse(&a, &b), &c),
                alg.leq(&a, &alg.imp(&b, &c)),
                "residuation at {a:?} {b:?} {c:?}"
            );
            assert_eq!(alg.join(&alg.imp(&a, &c), &alg.imp(&c, &a)), one, "prelinearity");
            assert_eq!(alg.meet(&a, &c), alg.fuse(&a, &alg.imp(&a, &c)), "divisibility");
        }
    }

    #[test]
    fn bl_laws_hold_in_every_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rng = &mut rng;
        check_bl_laws(&LukasiewiczQ, || random_unit(rng), 10_000);
        check_bl_laws(&ProductQ, || random_unit(rng), 10_000);
        check_bl_laws(&TrivializedProductQ, || random_unit(rng), 2_000);
        check_bl_laws(&BooleanTrivial, || rng.gen_bool(0.5), 200);
        for n in 1..7 {
            let mv = FiniteMv { n };
            check_bl_laws(&mv, || rng.gen_range(0..=n), 2_000);
        }
        for chain in [
            GodelChainSpec::standard(),
            GodelChainSpec::qr(rat(1, 2)).unwrap(),
            GodelChainSpec::qpg(rat(1, 3), TailLen::Finite(2)).unwrap(),
            GodelChainSpec::qpg(rat(0, 1), TailLen::Omega).unwrap(),
        ] {
            let mut r2 = ChaCha8Rng::seed_from_u64(5);
            check_bl_laws(&chain, || random_godel(&mut r2, &chain), 5_000);
        }
        let gadget = GadgetAlgebra::new(&[2, 3].into_iter().collect()).unwrap();
        check_bl_laws(&gadget, || vec![random_sqrt(rng), random_sqrt(rng)], 2_000);
    }

    proptest! {
        #[test]
        fn godel_output_is_assigned_constant_or_top(
            f in arb_formula(),
            seed in any::<u64>(),
            which in 0usize..3,
        ) {
            let chains = [
                GodelChainSpec::standard(),
                GodelChainSpec::qr(rat(2, 5)).unwrap(),
                GodelChainSpec::qpg(rat(1, 3), TailLen::Finite(2)).unwrap(),
            ];
            let chain = &chains[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: BTreeMap<u32, GodelValue> =
                (0..4).map(|v| (v, random_godel(&mut rng, chain))).collect();
            let out = eval_godel(&f, chain, &a).unwrap();
            let allowed = out == GodelValue::Top
                || out == chain.zero()
                || a.values().any(|v| *v == out)
                || f.constants().iter().any(|q| chain.interpret_constant(q) == out);
            prop_assert!(allowed, "{} gave {:?}", f, out);
        }
    }

    fn grid(d: i64) -> Vec<Rational> {
        (0..=d).map(|k| rat(k, d)).collect()
    }

    #[test]
    fn bookkeeping_examples() {
        let mv = FiniteMv { n: 3 };
        let t = InterpretationTable::from_algebra(&mv, &[0, 1, 2, 3], |k| format!("{k}/3"), &grid(3)).unwrap();
        assert_eq!(check_bookkeeping(&t, Flavor::Luk), vec![]);

        let mut t = InterpretationTable {
            carrier: ["0", "1/4", "1/3", "1/2", "1"].map(String::from).to_vec(),
            fuse: vec![vec![0; 5]; 5],
            imp: vec![vec![4; 5]; 5],
            zero: 0,
            one: 4,
            constants: BTreeMap::from([(rat(1, 4), 1), (rat(1, 2), 3)]),
        };
        for k in 0..5 {
            t.fuse[4][k] = k;
            t.fuse[k][4] = k;
        }
        t.fuse[3][3] = 2;
        let v = check_bookkeeping(&t, Flavor::Prod);
        let fuse_violations: Vec<_> =
            v.iter().filter(|v| matches!(v.equation, BookkeepingEquation::Fuse(..))).collect();
        assert_eq!(fuse_violations.len(), 1);
        assert_eq!(fuse_violations[0].equation, BookkeepingEquation::Fuse(rat(1, 2), rat(1, 2)));
        assert_eq!(fuse_violations[0].found, "1/3");

        let consts: Vec<Rational> = (1..=12).flat_map(grid).collect();
        let t = InterpretationTable::from_algebra(
            &TrivializedProductQ,
            &[rat(0, 1), rat(1, 1)],
            |q| q.to_string(),
            &consts,
        )
        .unwrap();
        assert_eq!(check_bookkeeping(&t, Flavor::Prod), vec![]);
    }

    #[test]
    fn bookkeeping_holds_in_canonical_chains() {
        let consts: Vec<Rational> = {
            let mut v: Vec<Rational> = (1..=12).flat_map(grid).collect();
            v.sort();
            v.dedup();
            v
        };
        for d in 1..=12u32 {
            let mv = FiniteMv { n: d };
            let elems: Vec<u32> = (0..=d).collect();
            let t = InterpretationTable::from_algebra(&mv, &elems, |k| k.to_string(), &grid(d as i64)).unwrap();
            assert_eq!(check_bookkeeping(&t, Flavor::Luk), vec![], "Ł_{}", d + 1);
        }
        let g = GodelChainSpec::standard();
        let mut elems: Vec<GodelValue> = consts.iter().map(|q| g.interpret_constant(q)).collect();
        elems.dedup();
        let t = InterpretationTable::from_algebra(&g, &elems, |v| v.to_string(), &consts).unwrap();
        assert_eq!(check_bookkeeping(&t, Flavor::Godel), vec![]);
        assert_eq!(check_bookkeeping_algebra(&LukasiewiczQ, &consts, Flavor::Luk), vec![]);
        assert_eq!(check_bookkeeping_algebra(&ProductQ, &consts, Flavor::Prod), vec![]);
        assert_eq!(check_bookkeeping_algebra(&TrivializedProductQ, &consts, Flavor::Prod), vec![]);
        assert_eq!(check_bookkeeping_algebra(&BooleanTrivial, &consts, Flavor::Prod), vec![]);
        assert!(!check_bookkeeping_algebra(&TrivializedProductQ, &consts, Flavor::Luk).is_empty());
    }

    #[test]
    fn table_json_round_trip() {
        let mv = FiniteMv { n: 2 };
        let t = InterpretationTable::from_algebra(&mv, &[0, 1, 2], |k| format!("e{k}"), &grid(2)).unwrap();
        let back = InterpretationTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let mut j = t.to_json();
        j["fuse"][0][0] = "nope".into();
        assert_eq!(InterpretationTable::from_json(&j), Err(TableError::UnknownElement("nope".into())));
    }
}
