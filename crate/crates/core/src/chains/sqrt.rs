//! Nonnegative numbers of the form `c · √m` with `c` rational and `m` a
//! squarefree positive integer.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numerics::{factorize, PrimePowerVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    coefficient: Rational,
    /// Primes of the squarefree radicand; empty for rationals and for 0.
    radicand: BTreeSet<u64>,
}

impl SqrtRational {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Panics on negative input.
    pub fn from_rational(q: Rational) -> Self {
        assert!(!q.is_negative(), "SqrtRational is nonnegative");
        Self { coefficient: q, radicand: BTreeSet::new() }
    }

    /// `coefficient · Π p^(e_p / 2)`, canonicalized.
    pub fn new(coefficient: Rational, half_exponents: &PrimePowerVector) -> Self {
        assert!(!coefficient.is_negative(), "SqrtRational is nonnegative");
        if coefficient.is_zero() {
            return Self::zero();
        }
        let mut coefficient = coefficient;
        let mut radicand = BTreeSet::new();
        for (p, e) in half_exponents.iter() {
            let (k, odd) = (e.div_euclid(2), e.rem_euclid(2) == 1);
            let factor = Rational::from_integer(BigInt::from(p)).pow(k as i32);
            coefficient *= factor;
            if odd {
                radicand.insert(p);
            }
        }
        Self { coefficient, radicand }
    }

    /// `1/√p`
    pub fn inv_sqrt(p: u64) -> Self {
        Self::new(Rational::one(), &[(p, -1)].into_iter().collect())
    }

    /// `√q` for a nonnegative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative number");
        if q.is_zero() {
            return Self::zero();
        }
        let to_u64 = |n: &BigInt| u64::try_from(n).expect("radicand fits in u64");
        let mut exps = factorize(to_u64(q.numer()));
        for (p, e) in factorize(to_u64(q.denom())).iter() {
            exps.add_exponent(p, -e);
        }
        Self::new(Rational::one(), &exps)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn radicand_primes(&self) -> &BTreeSet<u64> {
        &self.radicand
    }

    /// Stored half-exponents; each is 1 in canonical form.
    pub fn half_exponents(&self) -> PrimePowerVector {
        self.radicand.iter().map(|&p| (p, 1)).collect()
    }

    fn radicand_value(&self) -> BigInt {
        self.radicand.iter().map(|&p| BigInt::from(p)).product()
    }

    pub fn squared(&self) -> Rational {
        &self.coefficient * &self.coefficient * Rational::from_integer(self.radicand_value())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.radicand.is_empty().then(|| self.coefficient.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coefficient = &self.coefficient * &other.coefficient;
        for p in self.radicand.intersection(&other.radicand) {
            coefficient *= Rational::from_integer(BigInt::from(*p));
        }
        let radicand = self.radicand.symmetric_difference(&other.radicand).copied().collect();
        Self { coefficient, radicand }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let m = Rational::from_integer(self.radicand_value());
        Self { coefficient: (&self.coefficient * m).recip(), radicand: self.radicand.clone() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Rational enclosure `[lo, hi]` of the value with width about `10^-digits`.
    pub fn bounds(&self, digits: u32) -> (Rational, Rational) {
        let scale = BigInt::from(10u32).pow(digits);
        let floor = (self.radicand_value() * &scale * &scale).sqrt();
        let lo = Rational::new(floor.clone(), scale.clone());
        let hi = Rational::new(floor + 1, scale);
        if self.radicand.is_empty() {
            return (self.coefficient.clone(), self.coefficient.clone());
        }
        (&self.coefficient * lo, &self.coefficient * hi)
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared().cmp(&other.squared())
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_empty() {
            write!(f, "{}", self.coefficient)
        } else {
            write!(f, "{}*sqrt({})", self.coefficient, self.radicand_value())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_form() {
        let x = SqrtRational::inv_sqrt(2);
        assert_eq!(x.coefficient(), &rat(1, 2));
        assert_eq!(x.radicand_primes().iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(x.mul(&x), SqrtRational::from_rational(rat(1, 2)));
        let eight = SqrtRational::new(rat(1, 1), &[(2, 3)].into_iter().collect());
        assert_eq!(eight, SqrtRational::new(rat(2, 1), &[(2, 1)].into_iter().collect()));
        assert_eq!(
            SqrtRational::sqrt_of(&rat(1, 8)),
            SqrtRational::inv_sqrt(2).mul(&SqrtRational::from_rational(rat(1, 2)))
        );
        assert_eq!(SqrtRational::sqrt_of(&rat(9, 4)), SqrtRational::from_rational(rat(3, 2)));
    }

    #[test]
    fn reciprocal_and_division() {
        let x = SqrtRational::new(rat(3, 5), &[(2, 1), (3, -1)].into_iter().collect());
        assert_eq!(x.mul(&x.recip()), SqrtRational::one());
        let y = SqrtRational::inv_sqrt(7);
        assert_eq!(x.div(&y).mul(&y), x);
        assert_eq!(SqrtRational::zero().mul(&x), SqrtRational::zero());
    }

    fn random_element(rng: &mut ChaCha8Rng) -> SqrtRational {
        let primes = [2u64, 3, 5, 7];
        let exps: PrimePowerVector =
            primes.iter().map(|&p| (p, rng.gen_range(-3i64..=3))).filter(|&(_, e)| e != 0).collect();
        let c = rat(rng.gen_range(0..40), rng.gen_range(1..40));
        SqrtRational::new(c, &exps)
    }

    #[test]
    fn order_agrees_with_interval_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut decided = 0;
        for _ in 0..1000 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let (alo, ahi) = a.bounds(12);
            let (blo, bhi) = b.bounds(12);
            assert!(alo <= ahi && blo <= bhi);
            assert!(alo.clone() * alo.clone() <= a.squared() && a.squared() <= ahi.clone() * ahi.clone());
            if ahi < blo {
                assert_eq!(a.cmp(&b), Ordering::Less, "{a} vs {b}");
                decided += 1;
            } else if bhi < alo {
                assert_eq!(a.cmp(&b), Ordering::Greater, "{a} vs {b}");
                decided += 1;
            }
            assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        }
        assert!(decided > 900);
    }
}
