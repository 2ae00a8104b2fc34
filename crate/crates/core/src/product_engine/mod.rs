//! Admissibility and derivability in rational product logic.
//!
//! Admissible rules are exactly the quasiequations valid in the rational
//! product chain, so admissibility is decided by dovetailing a fair
//! countermodel search in that chain with a derivation search over the
//! admissible base rules. Derivability is approached from both sides
//! with three refuting chains and a cut-free derivation search.

mod derivation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::chains::{evaluate_map, BlAlgebra, BooleanTrivial, ProductQ, TrivializedProductQ};
use crate::formula::{Equation, Formula, Quasiequation, Rule};
use crate::numerics::{nth_root_rational, Rational, RationalTuples, SeededRationals};
use crate::verdict::{Exhausted, Verdict};

pub use derivation::{
    accept_theorem, check_derivation, derive_with_base, derive_without_base, match_pattern, removable, root_disjunct,
    semantically_consistent, whitelist_match, Derivation, DerivationError, DerivationStep, Justification,
    GROUND_BOOKKEEPING, JOIN_INCLUSION,
};

/// A rule of the admissible base: `c_q ∨ z ▷ z`, or `(c_p ↔ x^n) ∨ z ▷ z`
/// with an irrational `n`-th root of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRule {
    ConstJoin { q: Rational },
    RootJoin { p: Rational, n: u32 },
}

impl BaseRule {
    pub fn is_valid(&self) -> bool {
        match self {
            BaseRule::ConstJoin { q } => *q > Rational::zero() && *q < Rational::one(),
            BaseRule::RootJoin { p, n } => {
                *n >= 1 && *p >= Rational::zero() && *p <= Rational::one() && nth_root_rational(p, *n).is_none()
            }
        }
    }

    /// The rule itself, with `z = x2` and `x = x1`.
    pub fn to_rule(&self) -> Rule {
        let z = Formula::Var(2);
        let removable = match self {
            BaseRule::ConstJoin { q } => Formula::constant(q.clone()).expect("q in (0,1)"),
            BaseRule::RootJoin { p, n } => {
                Formula::equiv(Formula::constant(p.clone()).expect("p in [0,1]"), Formula::pow(Formula::Var(1), *n))
            }
        };
        Rule::new(vec![Formula::or(removable, z.clone())], z)
    }
}

impl fmt::Display for BaseRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRule::ConstJoin { q } => write!(f, "const-join {q}"),
            BaseRule::RootJoin { p, n } => write!(f, "root-join {p} {n}"),
        }
    }
}

/// `(c_p ↔ x1^n) ∨ x2 ▷ x2` when the `n`-th root of `p` is irrational.
pub fn base_rule_instance(p: &Rational, n: u32) -> Option<Rule> {
    let rule = BaseRule::RootJoin { p: p.clone(), n };
    rule.is_valid().then(|| rule.to_rule())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DovetailBudget {
    pub max_tuples: u64,
    pub max_depth: u32,
    pub max_steps: u64,
}

impl Default for DovetailBudget {
    fn default() -> Self {
        Self { max_tuples: 100_000, max_depth: 6, max_steps: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("budgets must be positive")]
pub struct NonPositiveBudget;

impl DovetailBudget {
    pub fn new(max_tuples: u64, max_depth: u32, max_steps: u64) -> Result<Self, NonPositiveBudget> {
        if max_tuples == 0 || max_depth == 0 || max_steps == 0 {
            return Err(NonPositiveBudget);
        }
        Ok(Self { max_tuples, max_depth, max_steps })
    }
}

pub type Assignment = BTreeMap<u32, Rational>;

fn equation_holds<A: BlAlgebra>(alg: &A, e: &Equation, a: &BTreeMap<u32, A::Value>) -> bool {
    matches!(
        (evaluate_map(alg, &e.lhs, a), evaluate_map(alg, &e.rhs, a)),
        (Ok(l), Ok(r)) if l == r
    )
}

/// Whether `a` satisfies the premises of `q` and violates its conclusion.
pub fn refutes_in<A: BlAlgebra>(alg: &A, q: &Quasiequation, a: &BTreeMap<u32, A::Value>) -> bool {
    q.premises.iter().all(|e| equation_holds(alg, e, a)) && !equation_holds(alg, &q.conclusion, a)
}

/// Candidate values tried first: 0, 1, the constants of `q`, and their
/// rational roots of every degree up to the largest power in `q`.
fn seeds(q: &Quasiequation) -> Vec<Rational> {
    let mut max_power = 2;
    for e in q.equations() {
        for side in [&e.lhs, &e.rhs] {
            side.visit(&mut |f| {
                if let Formula::Fuse(..) = f {
                    max_power = max_power.max(f.as_power().1);
                }
            });
        }
    }
    let constants = q.constants();
    let mut out = vec![Rational::zero(), Rational::one()];
    out.extend(constants.iter().cloned());
    for n in 2..=max_power.min(16) {
        out.extend(constants.iter().filter_map(|c| nth_root_rational(c, n)));
    }
    out
}

/// Resumable fair search through rational assignments.
struct Refuter<'a, A: BlAlgebra<Value = Rational>> {
    alg: A,
    q: &'a Quasiequation,
    vars: Vec<u32>,
    tuples: RationalTuples<SeededRationals>,
    spent: u64,
    done: bool,
}

impl<'a, A: BlAlgebra<Value = Rational>> Refuter<'a, A> {
    fn new(alg: A, q: &'a Quasiequation) -> Self {
        let vars: Vec<u32> = q.variables().into_iter().collect();
        let tuples = RationalTuples::new(vars.len(), SeededRationals::new(seeds(q)));
        Self { alg, q, vars, tuples, spent: 0, done: false }
    }

    /// Examines up to `n` more tuples.
    fn advance(&mut self, n: u64) -> Option<Assignment> {
        for _ in 0..n {
            let Some(t) = self.tuples.next() else {
                self.done = true;
                return None;
            };
            self.spent += 1;
            let a: Assignment = self.vars.iter().copied().zip(t).collect();
            if refutes_in(&self.alg, self.q, &a) {
                return Some(a);
            }
        }
        None
    }
}

/// Fair search for an assignment in the rational product chain that
/// satisfies the premises and violates the conclusion; the first one in
/// the schedule is returned.
pub fn refute_in_qpiq(q: &Quasiequation, budget: &DovetailBudget) -> Option<Assignment> {
    Refuter::new(ProductQ, q).advance(budget.max_tuples)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityCertificate {
    Derivation(Derivation),
    /// A ground premise whose value is not 1, so no assignment satisfies
    /// the premises.
    VacuousPremise {
        premise: usize,
        value: Rational,
    },
}

pub type ProductVerdict = Verdict<AdmissibilityCertificate, Assignment>;

/// Admissibility by the default dovetail (one refutation chunk per
/// derivation round).
pub fn product_admissible(rule: &Rule, budget: &DovetailBudget) -> ProductVerdict {
    product_admissible_scheduled(rule, budget, 1)
}

/// Admissibility with round `d` spending `ratio · 2^(d+5)` tuples after a
/// derivation search of depth `d`.
pub fn product_admissible_scheduled(rule: &Rule, budget: &DovetailBudget, ratio: u64) -> ProductVerdict {
    for (i, p) in rule.premises.iter().enumerate() {
        if p.is_ground() {
            if let Ok(value) = evaluate_map(&ProductQ, p, &BTreeMap::new()) {
                if !value.is_one() {
                    return Verdict::Yes(AdmissibilityCertificate::VacuousPremise { premise: i, value });
                }
            }
        }
    }
    let q = rule.to_quasiequation();
    let mut refuter = Refuter::new(ProductQ, &q);
    let mut depth = 0;
    loop {
        if depth < budget.max_depth {
            depth += 1;
            let round = DovetailBudget { max_depth: depth, ..*budget };
            if let Some(d) = derive_with_base(rule, &round) {
                debug_assert!(check_derivation(rule, &d, true).is_ok());
                return Verdict::Yes(AdmissibilityCertificate::Derivation(d));
            }
        }
        let remaining = budget.max_tuples - refuter.spent;
        let chunk = ratio.max(1).saturating_mul(1 << (depth + 5).min(40)).min(remaining);
        if let Some(a) = refuter.advance(chunk) {
            return Verdict::No(a);
        }
        if (refuter.done || refuter.spent >= budget.max_tuples) && depth >= budget.max_depth {
            return Verdict::Unknown(Exhausted { tuples: refuter.spent, depth, steps: budget.max_steps });
        }
    }
}

/// Chains generating the proper subvarieties of rational product algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RpaChain {
    /// The rational product chain with constants as themselves.
    Faithful,
    /// The rational product chain with every positive constant sent to 1.
    Trivialized,
    /// The two-element chain with every positive constant sent to 1.
    Boolean,
}

impl fmt::Display for RpaChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RpaChain::Faithful => "rational product chain",
            RpaChain::Trivialized => "trivialized-constants product chain",
            RpaChain::Boolean => "two-element chain",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRefutation {
    pub chain: RpaChain,
    pub assignment: Assignment,
}

impl ChainRefutation {
    pub fn refutes(&self, q: &Quasiequation) -> bool {
        match self.chain {
            RpaChain::Faithful => refutes_in(&ProductQ, q, &self.assignment),
            RpaChain::Trivialized => refutes_in(&TrivializedProductQ, q, &self.assignment),
            RpaChain::Boolean => {
                let Some(a) = to_boolean(&self.assignment) else { return false };
                refutes_in(&BooleanTrivial, q, &a)
            }
        }
    }
}

fn to_boolean(a: &Assignment) -> Option<BTreeMap<u32, bool>> {
    a.iter()
        .map(|(v, x)| match () {
            _ if x.is_zero() => Some((*v, false)),
            _ if x.is_one() => Some((*v, true)),
            _ => None,
        })
        .collect()
}

/// Exhaustive search of the two-element chain.
fn refute_boolean(q: &Quasiequation) -> Option<Assignment> {
    let vars: Vec<u32> = q.variables().into_iter().collect();
    assert!(vars.len() < 32, "too many variables for exhaustive search");
    (0u64..1 << vars.len()).find_map(|bits| {
        let a: BTreeMap<u32, bool> = vars.iter().enumerate().map(|(k, v)| (*v, bits >> k & 1 == 1)).collect();
        refutes_in(&BooleanTrivial, q, &a)
            .then(|| a.into_iter().map(|(v, b)| (v, if b { Rational::one() } else { Rational::zero() })).collect())
    })
}

pub type DerivabilityVerdict = Verdict<Derivation, ChainRefutation>;

/// Sound two-sided search for derivability in rational product logic.
pub fn product_derivable_sound(rule: &Rule, budget: &DovetailBudget) -> DerivabilityVerdict {
    let q = rule.to_quasiequation();
    let mut faithful = Refuter::new(ProductQ, &q);
    let mut trivialized = Refuter::new(TrivializedProductQ, &q);
    let mut depth = 0;
    loop {
        if depth < budget.max_depth {
            depth += 1;
            let round = DovetailBudget { max_depth: depth, ..*budget };
            if let Some(d) = derive_without_base(rule, &round) {
                debug_assert!(check_derivation(rule, &d, false).is_ok());
                return Verdict::Yes(d);
            }
        }
        let remaining = budget.max_tuples.saturating_sub(faithful.spent + trivialized.spent);
        let chunk = (1u64 << (depth + 5).min(40)).min(remaining / 2 + remaining % 2);
        if let Some(assignment) = faithful.advance(chunk) {
            return Verdict::No(ChainRefutation { chain: RpaChain::Faithful, assignment });
        }
        if let Some(assignment) = trivialized.advance(chunk) {
            return Verdict::No(ChainRefutation { chain: RpaChain::Trivialized, assignment });
        }
        if depth == 1 {
            if let Some(assignment) = refute_boolean(&q) {
                return Verdict::No(ChainRefutation { chain: RpaChain::Boolean, assignment });
            }
        }
        let spent = faithful.spent + trivialized.spent;
        let exhausted = spent >= budget.max_tuples || (faithful.done && trivialized.done);
        if exhausted && depth >= budget.max_depth {
            return Verdict::Unknown(Exhausted { tuples: spent, depth, steps: budget.max_steps });
        }
    }
}

/// Parameters of a passive rule `c_q ∨ ⋁ (x_i^{n_i} ↔ c_{p_i}) ▷ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PscForm {
    pub q: Rational,
    pub roots: Vec<(Rational, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PscMismatch {
    #[error("expected exactly one premise")]
    PremiseCount,
    #[error("conclusion is not 0")]
    Conclusion,
    #[error("expected exactly one constant disjunct")]
    ConstantDisjunct,
    #[error("disjunct {0} is not of the form x^n <-> c_p")]
    Disjunct(String),
    #[error("variable x{0} occurs in more than one disjunct")]
    RepeatedVariable(u32),
    #[error("the {1}-th root of {0} is rational")]
    RationalRoot(Rational, u32),
}

/// Recognizes the passive-rule schema up to reassociation of `∨`; each
/// root disjunct may be written either way round.
pub fn psc_rule_form(rule: &Rule) -> Result<PscForm, PscMismatch> {
    let [premise] = rule.premises.as_slice() else { return Err(PscMismatch::PremiseCount) };
    if rule.conclusion != Formula::Zero {
        return Err(PscMismatch::Conclusion);
    }
    let mut q = None;
    let mut roots = Vec::new();
    let mut seen = BTreeSet::new();
    for d in premise.disjuncts() {
        match d {
            Formula::Zero | Formula::Const(_) => {
                if q.is_some() {
                    return Err(PscMismatch::ConstantDisjunct);
                }
                q = Some(d.constant_value().expect("constant disjunct"));
            }
            _ => {
                let Some((p, Formula::Var(x), n)) = root_disjunct(d) else {
                    return Err(PscMismatch::Disjunct(d.to_string()));
                };
                if !seen.insert(*x) {
                    return Err(PscMismatch::RepeatedVariable(*x));
                }
                if nth_root_rational(&p, n).is_some() {
                    return Err(PscMismatch::RationalRoot(p, n));
                }
                roots.push((p, n));
            }
        }
    }
    let q = q.ok_or(PscMismatch::ConstantDisjunct)?;
    Ok(PscForm { q, roots })
}

/// The subvarieties of rational product algebras, smallest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RpaLevel {
    Trivial,
    Boolean,
    PAstar,
    Rpa,
}

impl fmt::Display for RpaLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RpaLevel::Trivial => "trivial",
            RpaLevel::Boolean => "boolean",
            RpaLevel::PAstar => "pa-star",
            RpaLevel::Rpa => "rpa",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubvarietyProbe {
    pub level: RpaLevel,
    /// Set when the level rests on a bounded search of an infinite chain.
    pub bounded: bool,
}

fn survives<A: BlAlgebra<Value = Rational> + Copy>(alg: A, eqs: &[Equation], budget: &DovetailBudget) -> bool {
    eqs.iter().all(|e| {
        let q = Quasiequation::new(Vec::new(), e.clone());
        Refuter::new(alg, &q).advance(budget.max_tuples).is_none()
    })
}

/// The largest generator among the four canonical chains in which every
/// equation survives the refutation budget.
pub fn rpa_subvariety_probe(eqs: &[Equation], budget: &DovetailBudget) -> SubvarietyProbe {
    let bounded = eqs.iter().any(|e| !e.variables().is_empty());
    if survives(ProductQ, eqs, budget) {
        return SubvarietyProbe { level: RpaLevel::Rpa, bounded };
    }
    if survives(TrivializedProductQ, eqs, budget) {
        return SubvarietyProbe { level: RpaLevel::PAstar, bounded };
    }
    let boolean = eqs.iter().all(|e| refute_boolean(&Quasiequation::new(Vec::new(), e.clone())).is_none());
    let level = if boolean { RpaLevel::Boolean } else { RpaLevel::Trivial };
    SubvarietyProbe { level, bounded: false }
}
