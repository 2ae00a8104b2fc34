//! A small forward calculus for rational product logic: premises,
//! whitelisted theorem schemas, modus ponens, disjunction weakening and
//! cuts by the admissible base rules.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::chains::{eval_product_rational, evaluate_map, ProductQ};
use crate::formula::{parse_formula, Formula, Rule, Substitution};
use crate::numerics::{nth_root_rational, Rational, RationalTuples, SeededRationals};

use super::{BaseRule, DovetailBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Index into the rule's premises.
    Premise(usize),
    /// Name of the whitelisted schema the formula instantiates.
    Theorem(&'static str),
    /// From `φ` (minor) and `φ → ψ` (major) infer `ψ`.
    ModusPonens { minor: usize, major: usize },
    /// From `d ∨ ψ`, with `d` the base rule's removable disjunct, infer `ψ`.
    BaseRuleCut { rule: BaseRule, from: usize },
    /// From `φ` infer `φ ∨ ψ` or `ψ ∨ φ`.
    Monotone(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn uses_base_rules(&self) -> bool {
        self.steps.iter().any(|s| matches!(s.justification, Justification::BaseRuleCut { .. }))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    let (kind, extra) = match &s.justification {
                        Justification::Premise(i) => ("premise", json!({ "index": i })),
                        Justification::Theorem(name) => ("theorem", json!({ "schema": name })),
                        Justification::ModusPonens { minor, major } => {
                            ("modus_ponens", json!({ "minor": minor, "major": major }))
                        }
                        Justification::BaseRuleCut { rule, from } => {
                            ("base_rule_cut", json!({ "rule": rule.to_string(), "from": from }))
                        }
                        Justification::Monotone(i) => ("monotone", json!({ "from": i })),
                    };
                    let mut obj = json!({ "formula": s.formula.to_string(), "by": kind });
                    if let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) {
                        o.extend(e);
                    }
                    obj
                })
                .collect(),
        )
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{i}: {}    [{:?}]", s.formula, s.justification)?;
        }
        Ok(())
    }
}

const SCHEMAS: &[(&str, &str)] = &[
    ("A1", "(x1 -> x2) -> ((x2 -> x3) -> (x1 -> x3))"),
    ("A2", "x1 * x2 -> x1"),
    ("A3", "x1 * x2 -> x2 * x1"),
    ("A4", "x1 * (x1 -> x2) -> x2 * (x2 -> x1)"),
    ("A5a", "(x1 -> (x2 -> x3)) -> (x1 * x2 -> x3)"),
    ("A5b", "(x1 * x2 -> x3) -> (x1 -> (x2 -> x3))"),
    ("A6", "((x1 -> x2) -> x3) -> (((x2 -> x1) -> x3) -> x3)"),
    ("A7", "0 -> x1"),
    ("P1", "~~x3 -> ((x1 * x3 -> x2 * x3) -> (x1 -> x2))"),
    ("P2", "x1 /\\ ~x1 -> 0"),
    ("top", "1"),
    ("weakening", "x1 -> (x2 -> x1)"),
    ("fuse-right", "x1 * x2 -> x2"),
    ("pairing", "x1 -> (x2 -> x1 * x2)"),
    ("meet-intro", "x1 -> (x2 -> x1 /\\ x2)"),
    ("meet-left", "x1 /\\ x2 -> x1"),
    ("meet-right", "x1 /\\ x2 -> x2"),
    ("prelinearity", "(x1 -> x2) \\/ (x2 -> x1)"),
    ("divisibility", "x1 /\\ x2 -> x1 * (x1 -> x2)"),
    ("join-monotone", "(x1 -> x2) -> (x1 \\/ x3 -> x2 \\/ x3)"),
    ("fuse-monotone", "(x1 -> x2) -> (x1 * x3 -> x2 * x3)"),
    ("imp-monotone", "(x1 -> x2) -> ((x3 -> x1) -> (x3 -> x2))"),
];

/// Every disjunct of the antecedent other than `0` occurs in the consequent.
pub const JOIN_INCLUSION: &str = "join-inclusion";
/// A variable-free formula whose value is 1.
pub const GROUND_BOOKKEEPING: &str = "ground-bookkeeping";

fn sample_assignments(vars: BTreeSet<u32>, count: usize) -> impl Iterator<Item = BTreeMap<u32, Rational>> {
    let seeds = SeededRationals::new([Rational::zero(), Rational::one()]);
    RationalTuples::new(vars.len(), seeds).take(count).map(move |t| vars.iter().copied().zip(t).collect())
}

/// Whether `f` evaluates to 1 at the first `count` scheduled assignments.
fn survives_spot_check(f: &Formula, count: usize) -> bool {
    sample_assignments(f.variables(), count).all(|a| matches!(eval_product_rational(f, &a), Ok(v) if v.is_one()))
}

fn schemas() -> &'static [(&'static str, Formula)] {
    static LOADED: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    LOADED.get_or_init(|| {
        SCHEMAS
            .iter()
            .map(|(name, text)| {
                let f = parse_formula(text).expect("schema text parses");
                assert!(survives_spot_check(&f, 2000), "schema {name} fails in the rational product chain");
                (*name, f)
            })
            .collect()
    })
}

/// Syntactic matching of `pattern` (variables as metavariables) against `f`.
pub fn match_pattern(pattern: &Formula, f: &Formula, sigma: &mut Substitution) -> bool {
    match (pattern, f) {
        (Formula::Var(v), _) => match sigma.get(*v) {
            Some(bound) => bound == f,
            None => {
                sigma.insert(*v, f.clone());
                true
            }
        },
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Fuse(a, b), Formula::Fuse(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d)) => match_pattern(a, c, sigma) && match_pattern(b, d, sigma),
        _ => pattern == f,
    }
}

fn join_included(f: &Formula) -> bool {
    let Formula::Imp(a, b) = f else { return false };
    let target: BTreeSet<&Formula> = b.disjuncts().into_iter().collect();
    a.disjuncts().into_iter().all(|d| *d == Formula::Zero || target.contains(d))
}

/// Name of the whitelisted schema `f` instantiates, if any.
pub fn whitelist_match(f: &Formula) -> Option<&'static str> {
    if f.is_ground() {
        if matches!(eval_product_rational(f, &Default::default()), Ok(v) if v.is_one()) {
            return Some(GROUND_BOOKKEEPING);
        }
    }
    if join_included(f) {
        return Some(JOIN_INCLUSION);
    }
    schemas().iter().find(|(_, p)| match_pattern(p, f, &mut Substitution::new())).map(|(name, _)| *name)
}

/// Theorem oracle: whitelist membership, confirmed by a bounded search for
/// a countermodel in the rational product chain.
pub fn accept_theorem(f: &Formula) -> Option<&'static str> {
    let name = whitelist_match(f)?;
    survives_spot_check(f, 64).then_some(name)
}

/// Recognizes `c_p ↔ χ^n` and `χ^n ↔ c_p` with `p ∈ (0,1)`; returns
/// `(p, χ, maximal n)`.
pub fn root_disjunct(d: &Formula) -> Option<(Rational, &Formula, u32)> {
    let Formula::Fuse(l, r) = d else { return None };
    let (Formula::Imp(a, b), Formula::Imp(b2, a2)) = (&**l, &**r) else { return None };
    if a != a2 || b != b2 {
        return None;
    }
    let (p, power) = match (&**a, &**b) {
        (Formula::Const(p), other) | (other, Formula::Const(p)) => (p.clone(), other),
        _ => return None,
    };
    let (base, n) = power.as_power();
    Some((p, base, n))
}

/// The base rule that can remove disjunct `d`, if any.
pub fn removable(d: &Formula) -> Option<BaseRule> {
    if let Formula::Const(q) = d {
        return Some(BaseRule::ConstJoin { q: q.clone() });
    }
    let (p, _, n) = root_disjunct(d)?;
    nth_root_rational(&p, n).is_none().then_some(BaseRule::RootJoin { p, n })
}

/// Whether `d` is an instance of the removable disjunct of `rule`.
fn cut_applies(rule: &BaseRule, d: &Formula) -> bool {
    if !rule.is_valid() {
        return false;
    }
    match rule {
        BaseRule::ConstJoin { q } => *d == Formula::Const(q.clone()),
        BaseRule::RootJoin { p, n } => {
            let Formula::Fuse(l, _) = d else { return false };
            let Formula::Imp(a, b) = &**l else { return false };
            let c = Formula::Const(p.clone());
            let power = if **a == c {
                b
            } else if **b == c {
                a
            } else {
                return false;
            };
            let base = match (&**power, *n) {
                (f, 1) => f,
                (Formula::Fuse(x, _), _) => x,
                _ => return false,
            };
            let expected = Formula::pow(base.clone(), *n);
            *d == Formula::equiv(c.clone(), expected.clone()) || *d == Formula::equiv(expected, c)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error("derivation is empty")]
    Empty,
    #[error("step {0} refers to a later or missing step")]
    ForwardReference(usize),
    #[error("step {0} is not a premise of the rule")]
    NotAPremise(usize),
    #[error("step {0} is not an accepted theorem")]
    NotATheorem(usize),
    #[error("step {0} is not a modus ponens consequence")]
    BadModusPonens(usize),
    #[error("step {0} is not a valid base-rule cut")]
    BadCut(usize),
    #[error("step {0} uses a base-rule cut where none is allowed")]
    CutNotAllowed(usize),
    #[error("step {0} is not a disjunction of the cited step")]
    BadMonotone(usize),
    #[error("last step is not the conclusion")]
    WrongConclusion,
}

/// Replays `d` against `rule`; `allow_cuts` permits base-rule cuts.
pub fn check_derivation(rule: &Rule, d: &Derivation, allow_cuts: bool) -> Result<(), DerivationError> {
    use DerivationError::*;
    if d.steps.is_empty() {
        return Err(Empty);
    }
    for (k, step) in d.steps.iter().enumerate() {
        let earlier = |i: usize| -> Result<&Formula, DerivationError> {
            if i < k {
                Ok(&d.steps[i].formula)
            } else {
                Err(ForwardReference(k))
            }
        };
        let f = &step.formula;
        match &step.justification {
            Justification::Premise(i) => {
                if rule.premises.get(*i) != Some(f) {
                    return Err(NotAPremise(k));
                }
            }
            Justification::Theorem(name) => {
                if accept_theorem(f) != Some(*name) {
                    return Err(NotATheorem(k));
                }
            }
            Justification::ModusPonens { minor, major } => {
                let (a, imp) = (earlier(*minor)?, earlier(*major)?);
                if *imp != Formula::imp(a.clone(), f.clone()) {
                    return Err(BadModusPonens(k));
                }
            }
            Justification::BaseRuleCut { rule: base, from } => {
                if !allow_cuts {
                    return Err(CutNotAllowed(k));
                }
                let Formula::Or(dj, rest) = earlier(*from)? else { return Err(BadCut(k)) };
                if **rest != *f || !cut_applies(base, dj) {
                    return Err(BadCut(k));
                }
            }
            Justification::Monotone(i) => {
                let a = earlier(*i)?;
                match f {
                    Formula::Or(l, r) if **l == *a || **r == *a => {}
                    _ => return Err(BadMonotone(k)),
                }
            }
        }
    }
    if d.conclusion() != Some(&rule.conclusion) {
        return Err(WrongConclusion);
    }
    Ok(())
}

struct Builder {
    steps: Vec<DerivationStep>,
    index: HashMap<Formula, usize>,
    max_steps: u64,
    allow_cuts: bool,
}

impl Builder {
    fn full(&self) -> bool {
        self.steps.len() as u64 >= self.max_steps
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> Option<usize> {
        if let Some(&i) = self.index.get(&formula) {
            return Some(i);
        }
        if self.full() {
            return None;
        }
        self.steps.push(DerivationStep { formula: formula.clone(), justification });
        self.index.insert(formula, self.steps.len() - 1);
        Some(self.steps.len() - 1)
    }

    fn theorem(&mut self, f: Formula) -> Option<usize> {
        if let Some(&i) = self.index.get(&f) {
            return Some(i);
        }
        let name = accept_theorem(&f)?;
        self.push(f, Justification::Theorem(name))
    }

    /// From step `i` holding `φ`, derive `target` through the theorem
    /// `φ → target`.
    fn via_theorem(&mut self, i: usize, target: Formula) -> Option<usize> {
        if self.steps[i].formula == target {
            return Some(i);
        }
        let major = self.theorem(Formula::imp(self.steps[i].formula.clone(), target.clone()))?;
        self.push(target, Justification::ModusPonens { minor: i, major })
    }

    fn mp(&mut self, minor: usize, major: usize) -> Option<usize> {
        let Formula::Imp(_, b) = &self.steps[major].formula else { return None };
        let b = (**b).clone();
        self.push(b, Justification::ModusPonens { minor, major })
    }

    /// One round of forward moves on everything derived so far.
    fn forward(&mut self) -> bool {
        let before = self.steps.len();
        for i in 0..before {
            if self.full() {
                break;
            }
            let f = self.steps[i].formula.clone();
            match &f {
                Formula::And(a, b) | Formula::Fuse(a, b) => {
                    self.via_theorem(i, (**a).clone());
                    self.via_theorem(i, (**b).clone());
                }
                Formula::Imp(a, _) => {
                    if let Some(&minor) = self.index.get(&**a) {
                        self.mp(minor, i);
                    }
                }
                _ => {}
            }
            if self.allow_cuts {
                self.cut_all(i);
            }
        }
        self.steps.len() > before
    }

    /// Removes every removable disjunct of step `i`, one cut at a time.
    fn cut_all(&mut self, mut i: usize) {
        loop {
            let f = self.steps[i].formula.clone();
            let ds: Vec<Formula> = f.disjuncts().into_iter().cloned().collect();
            let Some(pos) = ds.iter().position(|d| removable(d).is_some()) else { return };
            let rule = removable(&ds[pos]).expect("checked");
            let mut rest = ds.clone();
            let d = rest.remove(pos);
            let rest = Formula::join_all(rest);
            let shaped = Formula::or(d, rest.clone());
            let source =
                if ds.len() == 1 { self.push(shaped, Justification::Monotone(i)) } else { self.via_theorem(i, shaped) };
            let Some(src) = source else { return };
            let Some(next) = self.push(rest, Justification::BaseRuleCut { rule, from: src }) else { return };
            i = next;
        }
    }

    /// Goal-directed search for `goal` from what is derived so far.
    fn prove(&mut self, goal: &Formula, depth: u32) -> Option<usize> {
        if let Some(&i) = self.index.get(goal) {
            return Some(i);
        }
        if self.full() {
            return None;
        }
        if let Some(i) = self.theorem(goal.clone()) {
            return Some(i);
        }
        let candidates: Vec<usize> = (0..self.steps.len()).collect();
        for i in candidates.iter().copied() {
            let f = &self.steps[i].formula;
            if *f == Formula::Zero || join_included(&Formula::imp(f.clone(), goal.clone())) {
                if let Some(k) = self.via_theorem(i, goal.clone()) {
                    return Some(k);
                }
            }
        }
        if depth == 0 {
            return None;
        }
        match goal {
            Formula::Fuse(a, b) | Formula::And(a, b) => {
                let ia = self.prove(a, depth - 1)?;
                let ib = self.prove(b, depth - 1)?;
                let pairing = match goal {
                    Formula::Fuse(..) => Formula::fuse((**a).clone(), (**b).clone()),
                    _ => Formula::and((**a).clone(), (**b).clone()),
                };
                let t = self.theorem(Formula::imp((**a).clone(), Formula::imp((**b).clone(), pairing)))?;
                let partial = self.mp(ia, t)?;
                self.mp(ib, partial)
            }
            Formula::Or(a, b) => {
                let i = self.prove(a, depth - 1).or_else(|| self.prove(b, depth - 1))?;
                self.via_theorem(i, goal.clone())
            }
            Formula::Imp(a, b) => {
                let ib = self.prove(b, depth - 1)?;
                let t = self.theorem(Formula::imp((**b).clone(), Formula::imp((**a).clone(), (**b).clone())))?;
                self.mp(ib, t)
            }
            _ => {
                for major in candidates {
                    if let Formula::Imp(a, b) = &self.steps[major].formula {
                        if **b == *goal {
                            let a = (**a).clone();
                            if let Some(minor) = self.prove(&a, depth - 1) {
                                return self.mp(minor, major);
                            }
                        }
                    }
                }
                None
            }
        }
    }

    /// The steps needed for step `goal`, renumbered.
    fn extract(&self, goal: usize) -> Derivation {
        let mut needed = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            match &self.steps[i].justification {
                Justification::ModusPonens { minor, major } => stack.extend([*minor, *major]),
                Justification::BaseRuleCut { from, .. } | Justification::Monotone(from) => stack.push(*from),
                _ => {}
            }
        }
        let renumber: HashMap<usize, usize> = needed.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let steps = needed
            .iter()
            .map(|&i| {
                let s = &self.steps[i];
                let justification = match &s.justification {
                    Justification::ModusPonens { minor, major } => {
                        Justification::ModusPonens { minor: renumber[minor], major: renumber[major] }
                    }
                    Justification::BaseRuleCut { rule, from } => {
                        Justification::BaseRuleCut { rule: rule.clone(), from: renumber[from] }
                    }
                    Justification::Monotone(i) => Justification::Monotone(renumber[i]),
                    other => other.clone(),
                };
                DerivationStep { formula: s.formula.clone(), justification }
            })
            .collect();
        Derivation { steps }
    }
}

fn derive(rule: &Rule, budget: &DovetailBudget, allow_cuts: bool) -> Option<Derivation> {
    let mut b = Builder { steps: Vec::new(), index: HashMap::new(), max_steps: budget.max_steps, allow_cuts };
    for (i, p) in rule.premises.iter().enumerate() {
        b.push(p.clone(), Justification::Premise(i));
    }
    let goal = &rule.conclusion;
    for _ in 0..budget.max_depth {
        if let Some(i) = b.prove(goal, budget.max_depth) {
            return Some(b.extract(i));
        }
        if !b.forward() {
            break;
        }
    }
    b.prove(goal, budget.max_depth).map(|i| b.extract(i))
}

/// Bounded search for a derivation in rational product logic extended by
/// the admissible base rules. Sound, never complete.
pub fn derive_with_base(rule: &Rule, budget: &DovetailBudget) -> Option<Derivation> {
    derive(rule, budget, true)
}

/// As [`derive_with_base`] without base-rule cuts, so any result is a
/// derivation in rational product logic itself.
pub fn derive_without_base(rule: &Rule, budget: &DovetailBudget) -> Option<Derivation> {
    derive(rule, budget, false)
}

/// Spot-checks that a derivation's steps all take the value 1 wherever the
/// premises do, at the first `count` scheduled rational assignments.
pub fn semantically_consistent(rule: &Rule, d: &Derivation, count: usize) -> bool {
    let mut vars = rule.variables();
    for s in &d.steps {
        vars.extend(s.formula.variables());
    }
    sample_assignments(vars, count).all(|a| {
        let one = |f: &Formula| matches!(evaluate_map(&ProductQ, f, &a), Ok(v) if v.is_one());
        !rule.premises.iter().all(one) || d.steps.iter().all(|s| one(&s.formula))
    })
}
