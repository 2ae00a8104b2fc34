//! Consequence in rational Łukasiewicz logic.
//!
//! Every Łukasiewicz connective is piecewise linear with one breakpoint, so
//! a quasiequation fails in `[0,1] ∩ Q` iff one of the linear systems
//! obtained by fixing a side of each breakpoint has a solution with all
//! premises equal and the conclusion unequal. Branches are explored depth
//! first (the `≤` side before the `>` side) and solved exactly by
//! Fourier–Motzkin elimination. Since the logic is hereditarily
//! structurally complete, admissibility coincides with consequence.

mod fm;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::chains::{eval_luk_rational, evaluate_map, EvalError, FiniteMv};
use crate::formula::{Equation, Formula, Quasiequation, Rule};
use crate::numerics::Rational;
use crate::verdict::Verdict;

pub use fm::{fourier_motzkin, FmResult, LinExpr, LinearConstraint, Rel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LukOptions {
    /// Check feasibility after every guard and drop empty branches early.
    pub prune: bool,
}

impl Default for LukOptions {
    fn default() -> Self {
        Self { prune: true }
    }
}

/// Size of the explored case-split tree for a validity verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LukCertificate {
    /// Guarded connectives in the formula DAG.
    pub guards: usize,
    /// Linear systems solved at the leaves.
    pub leaves: usize,
}

pub type LukCountermodel = BTreeMap<u32, Rational>;
pub type LukVerdict = Verdict<LukCertificate, LukCountermodel>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Var(u32),
    Const(Rational),
    And(usize, usize),
    Or(usize, usize),
    Fuse(usize, usize),
    Imp(usize, usize),
}

/// Hash-consed formula DAG in topological order.
#[derive(Default)]
struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl Dag {
    fn intern(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        self.nodes.push(n.clone());
        self.index.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn add(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::Var(v) => Node::Var(*v),
            Formula::Const(q) => Node::Const(q.clone()),
            Formula::Zero => Node::Const(Rational::zero()),
            Formula::One => Node::Const(Rational::one()),
            Formula::And(a, b) => Node::And(self.add(a), self.add(b)),
            Formula::Or(a, b) => Node::Or(self.add(a), self.add(b)),
            Formula::Fuse(a, b) => Node::Fuse(self.add(a), self.add(b)),
            Formula::Imp(a, b) => Node::Imp(self.add(a), self.add(b)),
        };
        self.intern(node)
    }
}

fn konst(e: &LinExpr) -> Option<&Rational> {
    e.is_constant().then_some(&e.constant)
}

enum Step {
    Fixed(LinExpr),
    /// `lhs ≤ rhs` gives `low`, `lhs > rhs` gives `high`.
    Guard {
        diff: LinExpr,
        low: LinExpr,
        high: LinExpr,
    },
}

/// Value of a node from its children's values, possibly guarded.
fn step(node: &Node, values: &[LinExpr]) -> Step {
    let one = || LinExpr::constant(Rational::one());
    let zero = || LinExpr::constant(Rational::zero());
    let (a, b) = match node {
        Node::Var(v) => return Step::Fixed(LinExpr::var(*v)),
        Node::Const(q) => return Step::Fixed(LinExpr::constant(q.clone())),
        Node::And(a, b) | Node::Or(a, b) | Node::Fuse(a, b) | Node::Imp(a, b) => (&values[*a], &values[*b]),
    };
    let (ka, kb) = (konst(a), konst(b));
    // Shortcuts valid because every value lies in [0,1].
    let fixed = match node {
        Node::Fuse(..) => match (ka, kb) {
            (Some(k), _) if k.is_one() => Some(b.clone()),
            (_, Some(k)) if k.is_one() => Some(a.clone()),
            (Some(k), _) | (_, Some(k)) if k.is_zero() => Some(zero()),
            _ => None,
        },
        Node::Imp(..) => match (ka, kb) {
            (Some(k), _) if k.is_zero() => Some(one()),
            (_, Some(k)) if k.is_one() => Some(one()),
            (Some(k), _) if k.is_one() => Some(b.clone()),
            (_, Some(k)) if k.is_zero() => Some(one() - a.clone()),
            _ => None,
        },
        Node::And(..) | Node::Or(..) => {
            let is_and = matches!(node, Node::And(..));
            match (ka, kb) {
                (Some(k), _) if k.is_zero() => Some(if is_and { a.clone() } else { b.clone() }),
                (_, Some(k)) if k.is_zero() => Some(if is_and { b.clone() } else { a.clone() }),
                (Some(k), _) if k.is_one() => Some(if is_and { b.clone() } else { a.clone() }),
                (_, Some(k)) if k.is_one() => Some(if is_and { a.clone() } else { b.clone() }),
                _ if a == b => Some(a.clone()),
                _ => None,
            }
        }
        _ => unreachable!(),
    };
    if let Some(v) = fixed {
        return Step::Fixed(v);
    }
    let (diff, low, high) = match node {
        Node::Fuse(..) => (a.clone() + b.clone() - one(), zero(), a.clone() + b.clone() - one()),
        Node::Imp(..) => (a.clone() - b.clone(), one(), one() - a.clone() + b.clone()),
        Node::And(..) => (a.clone() - b.clone(), a.clone(), b.clone()),
        Node::Or(..) => (a.clone() - b.clone(), b.clone(), a.clone()),
        _ => unreachable!(),
    };
    if let Some(d) = konst(&diff) {
        return Step::Fixed(if *d <= Rational::zero() { low } else { high });
    }
    Step::Guard { diff, low, high }
}

struct Search {
    dag: Dag,
    /// Premise equations `(lhs, rhs)` keyed by the node completing them.
    ready: Vec<Vec<(usize, usize)>>,
    conclusion: (usize, usize),
    prune: bool,
    leaves: usize,
}

impl Search {
    fn feasible(&self, cs: &[LinearConstraint]) -> bool {
        !self.prune || fourier_motzkin(cs).is_sat()
    }

    fn run(&mut self, i: usize, values: &mut Vec<LinExpr>, cs: &mut Vec<LinearConstraint>) -> Option<LukCountermodel> {
        if i == self.dag.nodes.len() {
            let (l, r) = self.conclusion;
            for c in [
                LinearConstraint::lt(values[l].clone(), values[r].clone()),
                LinearConstraint::lt(values[r].clone(), values[l].clone()),
            ] {
                cs.push(c);
                self.leaves += 1;
                let result = fourier_motzkin(cs);
                cs.pop();
                if let FmResult::Sat(point) = result {
                    return Some(point);
                }
            }
            return None;
        }
        let branches: Vec<(Option<LinearConstraint>, LinExpr)> = match step(&self.dag.nodes[i], values) {
            Step::Fixed(v) => vec![(None, v)],
            Step::Guard { diff, low, high } => vec![
                (Some(LinearConstraint::new(diff.clone(), Rel::Le)), low),
                (Some(LinearConstraint::new(-diff, Rel::Lt)), high),
            ],
        };
        let is_var = matches!(self.dag.nodes[i], Node::Var(_));
        for (guard, value) in branches {
            let mark = cs.len();
            if is_var {
                cs.push(LinearConstraint::le(LinExpr::constant(Rational::zero()), value.clone()));
                cs.push(LinearConstraint::le(value.clone(), LinExpr::constant(Rational::one())));
            }
            let guarded = guard.is_some();
            cs.extend(guard);
            values.push(value);
            for &(l, r) in &self.ready[i] {
                cs.push(LinearConstraint::eq(values[l].clone(), values[r].clone()));
            }
            let added_premise = !self.ready[i].is_empty();
            let found =
                if (guarded || added_premise) && !self.feasible(cs) { None } else { self.run(i + 1, values, cs) };
            values.pop();
            cs.truncate(mark);
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn equation_holds_luk(e: &Equation, a: &LukCountermodel) -> bool {
    matches!(
        (eval_luk_rational(&e.lhs, a), eval_luk_rational(&e.rhs, a)),
        (Ok(l), Ok(r)) if l == r
    )
}

/// Whether `a` satisfies every premise and violates the conclusion.
pub fn luk_refutes(q: &Quasiequation, a: &LukCountermodel) -> bool {
    q.premises.iter().all(|e| equation_holds_luk(e, a)) && !equation_holds_luk(&q.conclusion, a)
}

/// Decides validity of `q` in the rational Łukasiewicz chain.
pub fn luk_check_quasieq(q: &Quasiequation, opts: LukOptions) -> LukVerdict {
    let mut dag = Dag::default();
    let premises: Vec<(usize, usize)> = q.premises.iter().map(|e| (dag.add(&e.lhs), dag.add(&e.rhs))).collect();
    let conclusion = (dag.add(&q.conclusion.lhs), dag.add(&q.conclusion.rhs));
    let mut ready = vec![Vec::new(); dag.nodes.len()];
    for &(l, r) in &premises {
        ready[l.max(r)].push((l, r));
    }
    let guards = dag.nodes.iter().filter(|n| !matches!(n, Node::Var(_) | Node::Const(_))).count();
    let mut search = Search { dag, ready, conclusion, prune: opts.prune, leaves: 0 };
    let mut values = Vec::new();
    let mut cs = Vec::new();
    match search.run(0, &mut values, &mut cs) {
        Some(mut point) => {
            for v in q.variables() {
                point.entry(v).or_insert_with(Rational::zero);
            }
            point.retain(|v, _| q.variables().contains(v));
            assert!(luk_refutes(q, &point), "countermodel failed re-validation");
            Verdict::No(point)
        }
        None => Verdict::Yes(LukCertificate { guards, leaves: search.leaves }),
    }
}

/// `Yes` iff the rule is derivable in rational Łukasiewicz logic.
pub fn luk_consequence(rule: &Rule) -> LukVerdict {
    luk_check_quasieq(&rule.to_quasiequation(), LukOptions::default())
}

/// Admissibility; identical to [`luk_consequence`].
pub fn luk_admissible(rule: &Rule) -> LukVerdict {
    luk_consequence(rule)
}

/// `a ⊕ b` written as `¬a → b`.
pub fn oplus(a: Formula, b: Formula) -> Formula {
    Formula::imp(Formula::neg(a), b)
}

/// `k`-fold `⊕`-sum of `u`, `k ≥ 1`.
pub fn multiple(u: &Formula, k: u32) -> Formula {
    assert!(k >= 1);
    (1..k).fold(u.clone(), |acc, _| oplus(acc, u.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicitDefinition {
    /// Variable forced to the defined value.
    pub defined: u32,
    /// The auxiliary `u` forced to `1/n`.
    pub aux: Vec<u32>,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0} is not strictly between 0 and 1")]
pub struct NotInOpenUnit(pub Rational);

/// Constant-free equations whose only solution sets `defined` to `r = m/n`:
/// `(n−1)·u ≈ ¬u` and `defined ≈ m·u`. Fresh variables start at `fresh`.
pub fn implicit_definition(r: &Rational, fresh: u32) -> Result<ImplicitDefinition, NotInOpenUnit> {
    if *r <= Rational::zero() || *r >= Rational::one() {
        return Err(NotInOpenUnit(r.clone()));
    }
    let to_u32 = |x: &num_bigint::BigInt| u32::try_from(x).expect("constant fits in u32");
    let (m, n) = (to_u32(r.numer()), to_u32(r.denom()));
    let (u, z) = (fresh, fresh + 1);
    let uf = Formula::Var(u);
    let equations = vec![
        Equation::new(multiple(&uf, n - 1), Formula::neg(uf.clone())),
        Equation::new(Formula::Var(z), multiple(&uf, m)),
    ];
    Ok(ImplicitDefinition { defined: z, aux: vec![u], equations })
}

/// Replaces each constant `c_r`, `0 < r < 1`, by a fresh variable and adds
/// its implicit definition to the premises. Returns the provenance of every
/// fresh variable.
pub fn eliminate_constants(q: &Quasiequation) -> (Quasiequation, BTreeMap<u32, Rational>) {
    let constants = q.constants();
    if constants.is_empty() {
        return (q.clone(), BTreeMap::new());
    }
    let mut fresh = q.variables().last().map_or(0, |v| v + 1);
    let mut provenance = BTreeMap::new();
    let mut premises = Vec::new();
    let mut replace: HashMap<Rational, u32> = HashMap::new();
    for c in &constants {
        let def = implicit_definition(c, fresh).expect("Const payloads lie in (0,1)");
        fresh += 2;
        for &u in &def.aux {
            provenance.insert(u, Rational::new(1.into(), c.denom().clone()));
        }
        provenance.insert(def.defined, c.clone());
        replace.insert(c.clone(), def.defined);
        premises.extend(def.equations);
    }
    fn strip(f: &Formula, replace: &HashMap<Rational, u32>) -> Formula {
        match f {
            Formula::Const(q) => Formula::Var(replace[q]),
            Formula::Var(_) | Formula::Zero | Formula::One => f.clone(),
            Formula::And(a, b) => Formula::and(strip(a, replace), strip(b, replace)),
            Formula::Or(a, b) => Formula::or(strip(a, replace), strip(b, replace)),
            Formula::Fuse(a, b) => Formula::fuse(strip(a, replace), strip(b, replace)),
            Formula::Imp(a, b) => Formula::imp(strip(a, replace), strip(b, replace)),
        }
    }
    let eq = |e: &Equation| Equation::new(strip(&e.lhs, &replace), strip(&e.rhs, &replace));
    premises.extend(q.premises.iter().map(eq));
    (Quasiequation::new(premises, eq(&q.conclusion)), provenance)
}

pub type FiniteCountermodel = (u32, BTreeMap<u32, u32>);

/// Exhaustive search of `Ł_2, …, Ł_{n_max+1}` for a failing assignment.
pub fn finite_chain_refute(q: &Quasiequation, n_max: u32) -> Result<Option<FiniteCountermodel>, EvalError> {
    if !q.is_constant_free() {
        return Err(EvalError::ConstantPresent);
    }
    let vars: Vec<u32> = q.variables().into_iter().collect();
    for n in 1..=n_max {
        let chain = FiniteMv { n };
        let mut idx = vec![0u32; vars.len()];
        loop {
            let a: BTreeMap<u32, u32> = vars.iter().copied().zip(idx.iter().copied()).collect();
            let holds = |e: &Equation| -> Result<bool, EvalError> {
                Ok(evaluate_map(&chain, &e.lhs, &a)? == evaluate_map(&chain, &e.rhs, &a)?)
            };
            let mut premises_hold = true;
            for e in &q.premises {
                if !holds(e)? {
                    premises_hold = false;
                    break;
                }
            }
            if premises_hold && !holds(&q.conclusion)? {
                return Ok(Some((n, a)));
            }
            let Some(pos) = idx.iter().rposition(|&k| k < n) else { break };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|k| *k = 0);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_rule;
    use crate::formula::tests::arb_formula;
    use crate::numerics::rat;
    use proptest::prelude::*;

    fn rule(s: &str) -> Rule {
        parse_rule(s).unwrap()
    }

    #[test]
    fn consequence_examples() {
        assert!(luk_consequence(&rule("x1 |- x1 (+) x1")).is_yes());
        let cm = luk_consequence(&rule("x1 (+) x1 |- x1")).no().unwrap();
        assert!(cm[&1] >= rat(1, 2) && cm[&1] < rat(1, 1));
        assert!(luk_consequence(&rule("#1/2 \\/ x1 |- x1")).is_yes());
        assert!(luk_consequence(&rule("|- (x1 -> x2) \\/ (x2 -> x1)")).is_yes());
        assert!(luk_consequence(&rule("|- #1/2 (+) #1/2")).is_yes());
        assert!(luk_consequence(&rule("|- x1 \\/ ~x1")).is_no());
        assert!(luk_consequence(&rule("x1 |- 0")).is_no());
        assert!(luk_consequence(&rule("#1/2 |- 0")).is_yes());
    }

    #[test]
    fn admissible_equals_consequence() {
        for r in ["x1 (+) x1 |- x1", "|- #1/2 (+) #1/2", "x1 * x2 |- x1 /\\ x2", "x1 \\/ x2 |- x1"] {
            let r = rule(r);
            assert_eq!(luk_admissible(&r), luk_consequence(&r));
        }
        assert!(luk_admissible(&rule("x1 (+) x1 |- x1")).is_no());
        assert!(luk_admissible(&rule("|- #1/2 (+) #1/2")).is_yes());
    }

    #[test]
    fn implicit_definitions_are_unique() {
        for r in [rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 5), rat(5, 6)] {
            let def = implicit_definition(&r, 1).unwrap();
            let z = Formula::Var(def.defined);
            for t in (0..=12).map(|k| rat(k, 12)) {
                let mut premises = def.equations.clone();
                premises.push(Equation::new(z.clone(), Formula::constant(t.clone()).unwrap()));
                let q = Quasiequation::new(premises, Equation::new(Formula::Zero, Formula::One));
                let verdict = luk_check_quasieq(&q, LukOptions::default());
                assert_eq!(verdict.is_no(), t == r, "r={r} t={t}");
            }
        }
        assert!(implicit_definition(&rat(0, 1), 0).is_err());
        assert!(implicit_definition(&rat(1, 1), 0).is_err());
    }

    #[test]
    fn implicit_definition_shapes() {
        let def = implicit_definition(&rat(1, 2), 5).unwrap();
        assert_eq!(def.aux, vec![5]);
        assert_eq!(def.equations[0], Equation::new(Formula::Var(5), Formula::neg(Formula::Var(5))));
        let def = implicit_definition(&rat(2, 3), 0).unwrap();
        assert_eq!(def.equations[0].lhs, oplus(Formula::Var(0), Formula::Var(0)));
        assert_eq!(def.equations[1].rhs, oplus(Formula::Var(0), Formula::Var(0)));
    }

    #[test]
    fn constant_elimination_examples() {
        let q = rule("|- #1/2 (+) #1/2").to_quasiequation();
        let (e, prov) = eliminate_constants(&q);
        assert!(e.is_constant_free());
        assert_eq!(prov.values().filter(|v| **v == rat(1, 2)).count(), 2);
        assert!(luk_check_quasieq(&e, LukOptions::default()).is_yes());
        assert_eq!(finite_chain_refute(&e, 4).unwrap(), None);

        let q = rule("|- x1 -> x1").to_quasiequation();
        assert_eq!(eliminate_constants(&q).0, q);

        let q = rule("#1/2 |- 0").to_quasiequation();
        let (e, _) = eliminate_constants(&q);
        assert_eq!(e.premises.len(), 3);
        assert!(luk_check_quasieq(&e, LukOptions::default()).is_yes());
    }

    #[test]
    fn finite_chain_examples() {
        let q = rule("x1 (+) x1 |- x1").to_quasiequation();
        let (n, a) = finite_chain_refute(&q, 2).unwrap().unwrap();
        assert_eq!((n, a[&1]), (2, 1));
        let thm = rule("|- (x1 -> x2) \\/ (x2 -> x1)").to_quasiequation();
        assert_eq!(finite_chain_refute(&thm, 6).unwrap(), None);
        assert!(finite_chain_refute(&rule("|- #1/2").to_quasiequation(), 2).is_err());
    }

    fn small_rule() -> impl Strategy<Value = Rule> {
        (proptest::collection::vec(arb_formula(), 0..2), arb_formula()).prop_map(|(p, c)| Rule::new(p, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn pruning_never_changes_verdicts(r in small_rule()) {
            let q = r.to_quasiequation();
            let pruned = luk_check_quasieq(&q, LukOptions { prune: true });
            let full = luk_check_quasieq(&q, LukOptions { prune: false });
            prop_assert_eq!(pruned.outcome(), full.outcome());
            if let Verdict::Yes(c) = full {
                prop_assert!(c.leaves <= 2usize << c.guards);
            }
        }

        #[test]
        fn constant_elimination_preserves_verdicts(r in small_rule()) {
            let q = r.to_quasiequation();
            prop_assume!(q.constants().len() <= 2);
            let (e, _) = eliminate_constants(&q);
            prop_assert_eq!(
                luk_check_quasieq(&q, LukOptions::default()).outcome(),
                luk_check_quasieq(&e, LukOptions::default()).outcome()
            );
        }

        #[test]
        fn finite_refutations_are_found(r in small_rule()) {
            let q = r.to_quasiequation();
            prop_assume!(q.is_constant_free());
            if finite_chain_refute(&q, 6).unwrap().is_some() {
                prop_assert!(luk_check_quasieq(&q, LukOptions::default()).is_no());
            }
        }
    }
}
