//! Decision procedures for rational Gödel logic and its axiomatic
//! extensions.
//!
//! Term values in a Gödel chain depend only on the relative order of the
//! assigned values and the interpreted constants, so validity of a
//! quasiequation in a chain is decided by enumerating order diagrams: each
//! variable is placed on an anchor (0 or an interpreted constant), in a gap
//! between anchors, in the tail of `Q_p^γ`, or on top.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::chains::{eval_godel, ChainSpecError, GodelChainSpec, GodelValue, TailLen};
use crate::formula::{Equation, Formula, Quasiequation, Rule};
use crate::numerics::{enumerate_rationals, parse_rational, Rational};
use crate::verdict::Verdict;

/// Consistent axiomatic extensions of RG.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GodelExtension {
    /// `RG_r`; `r = 1` is RG itself.
    RGr { r: Rational },
    /// `RG_p^γ`.
    RGpg { p: Rational, gamma: TailLen },
}

/// Generators of the nontrivial varieties of rational Gödel algebras.
pub type VarietyGen = GodelChainSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionParseError {
    #[error("expected \"r=m/n\" or \"p=m/n,gamma=k|omega\", got {0:?}")]
    Syntax(String),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error(transparent)]
    Range(#[from] ChainSpecError),
}

impl GodelExtension {
    pub fn rg() -> Self {
        GodelExtension::RGr { r: Rational::one() }
    }

    pub fn r(r: Rational) -> Result<Self, ChainSpecError> {
        GodelChainSpec::qr(r.clone())?;
        Ok(GodelExtension::RGr { r })
    }

    pub fn pg(p: Rational, gamma: TailLen) -> Result<Self, ChainSpecError> {
        GodelChainSpec::qpg(p.clone(), gamma)?;
        Ok(GodelExtension::RGpg { p, gamma })
    }

    /// Parses `r=m/n` or `p=m/n,gamma=k` (`gamma=omega` for ω).
    pub fn parse(text: &str) -> Result<Self, ExtensionParseError> {
        let syntax = || ExtensionParseError::Syntax(text.to_string());
        let rational = |s: &str| parse_rational(s.trim()).map_err(|_| ExtensionParseError::Rational(s.to_string()));
        let text_t = text.trim();
        if let Some(r) = text_t.strip_prefix("r=") {
            return Ok(GodelExtension::r(rational(r)?)?);
        }
        let rest = text_t.strip_prefix("p=").ok_or_else(syntax)?;
        let (p, gamma) = rest.split_once(',').ok_or_else(syntax)?;
        let gamma = gamma.trim().strip_prefix("gamma=").ok_or_else(syntax)?.trim();
        let gamma = match gamma {
            "omega" | "w" => TailLen::Omega,
            n => TailLen::Finite(n.parse().map_err(|_| syntax())?),
        };
        Ok(GodelExtension::pg(rational(p)?, gamma)?)
    }

    /// The chain generating the extension's quasivariety.
    pub fn generator(&self) -> GodelChainSpec {
        match self {
            GodelExtension::RGr { r } => GodelChainSpec::Qr { r: r.clone() },
            GodelExtension::RGpg { p, gamma } => GodelChainSpec::Qpg { p: p.clone(), gamma: *gamma },
        }
    }
}

impl fmt::Display for GodelExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GodelExtension::RGr { r } => write!(f, "r={r}"),
            GodelExtension::RGpg { p, gamma } => write!(f, "p={p},gamma={gamma}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GodelCountermodel {
    pub chain: GodelChainSpec,
    pub assignment: BTreeMap<u32, GodelValue>,
}

impl GodelCountermodel {
    /// Re-evaluates the quasiequation: all premises hold, the conclusion fails.
    pub fn refutes(&self, q: &Quasiequation) -> bool {
        let holds = |e: &Equation| {
            let l = eval_godel(&e.lhs, &self.chain, &self.assignment);
            let r = eval_godel(&e.rhs, &self.chain, &self.assignment);
            matches!((l, r), (Ok(l), Ok(r)) if l == r)
        };
        q.premises.iter().all(holds) && !holds(&q.conclusion)
    }
}

/// Chains searched and number of diagrams checked for a validity verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramCertificate {
    pub chains: Vec<GodelChainSpec>,
    pub diagrams: usize,
}

pub type GodelVerdict = Verdict<DiagramCertificate, GodelCountermodel>;

#[derive(Debug, Clone)]
enum Region {
    Point(GodelValue),
    /// Open rational interval; any number of blocks fits.
    Dense(Rational, Rational),
    /// Tail slots, capped for finite γ.
    Tail(Option<u32>),
}

fn regions(chain: &GodelChainSpec, constants: &BTreeSet<Rational>) -> Vec<Region> {
    let mut anchors: Vec<Rational> =
        std::iter::once(Rational::zero()).chain(constants.iter().filter(|q| chain.has_rational(q)).cloned()).collect();
    anchors.sort();
    anchors.dedup();
    let upper = match chain {
        GodelChainSpec::Qr { r } => Some(r.clone()),
        GodelChainSpec::Qpg { p, .. } => (anchors.last() < Some(p)).then(|| p.clone()),
    };
    let mut out = Vec::new();
    for (i, a) in anchors.iter().enumerate() {
        out.push(Region::Point(GodelValue::Rat(a.clone())));
        match anchors.get(i + 1) {
            Some(b) => out.push(Region::Dense(a.clone(), b.clone())),
            None => {
                if let Some(hi) = &upper {
                    out.push(Region::Dense(a.clone(), hi.clone()));
                }
            }
        }
    }
    if let GodelChainSpec::Qpg { gamma, .. } = chain {
        match gamma {
            TailLen::Finite(0) => {}
            TailLen::Finite(n) => out.push(Region::Tail(Some(*n))),
            TailLen::Omega => out.push(Region::Tail(None)),
        }
    }
    out.push(Region::Point(GodelValue::Top));
    out
}

/// Depth-first enumeration of the order diagrams of `vars` over `regions`.
/// Each diagram is produced exactly once: variables are inserted in order,
/// either into an existing block of a region or as a new block.
struct Diagrams<'a> {
    regions: &'a [Region],
    vars: Vec<u32>,
    place: Vec<(usize, u32)>,
    counts: Vec<u32>,
    seen: usize,
}

impl<'a> Diagrams<'a> {
    fn new(regions: &'a [Region], vars: Vec<u32>) -> Self {
        let n = vars.len();
        Self { regions, vars, place: vec![(0, 0); n], counts: vec![0; regions.len()], seen: 0 }
    }

    fn realize(&self) -> BTreeMap<u32, GodelValue> {
        self.vars
            .iter()
            .zip(&self.place)
            .map(|(&v, &(r, j))| {
                let value = match &self.regions[r] {
                    Region::Point(x) => x.clone(),
                    Region::Dense(lo, hi) => {
                        let t = Rational::new((j + 1).into(), (self.counts[r] + 1).into());
                        GodelValue::Rat(lo + (hi - lo) * t)
                    }
                    Region::Tail(_) => GodelValue::Tail(j),
                };
                (v, value)
            })
            .collect()
    }

    /// Returns true as soon as `visit` does.
    fn run(&mut self, i: usize, visit: &mut dyn FnMut(BTreeMap<u32, GodelValue>) -> bool) -> bool {
        if i == self.vars.len() {
            self.seen += 1;
            return visit(self.realize());
        }
        for r in 0..self.regions.len() {
            let cap = match &self.regions[r] {
                Region::Point(_) => {
                    self.place[i] = (r, 0);
                    if self.run(i + 1, visit) {
                        return true;
                    }
                    continue;
                }
                Region::Dense(..) => None,
                Region::Tail(cap) => *cap,
            };
            let c = self.counts[r];
            for j in 0..c {
                self.place[i] = (r, j);
                if self.run(i + 1, visit) {
                    return true;
                }
            }
            if cap.is_some_and(|m| c >= m) {
                continue;
            }
            for pos in 0..=c {
                for k in 0..i {
                    if self.place[k].0 == r && self.place[k].1 >= pos {
                        self.place[k].1 += 1;
                    }
                }
                self.place[i] = (r, pos);
                self.counts[r] += 1;
                let stop = self.run(i + 1, visit);
                self.counts[r] -= 1;
                for k in 0..i {
                    if self.place[k].0 == r && self.place[k].1 > pos {
                        self.place[k].1 -= 1;
                    }
                }
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

fn chain_diagrams(
    q: &Quasiequation,
    chain: &GodelChainSpec,
    visit: &mut dyn FnMut(BTreeMap<u32, GodelValue>) -> bool,
) -> usize {
    let regions = regions(chain, &q.constants());
    let mut d = Diagrams::new(&regions, q.variables().into_iter().collect());
    d.run(0, visit);
    d.seen
}

/// Decides validity of `q` in `chain`; the countermodel, if any, is the
/// first failing diagram in enumeration order.
pub fn check_quasieq_in_chain(q: &Quasiequation, chain: &GodelChainSpec) -> GodelVerdict {
    let holds = |e: &Equation, a: &BTreeMap<u32, GodelValue>| {
        eval_godel(&e.lhs, chain, a).expect("diagram values lie in the chain")
            == eval_godel(&e.rhs, chain, a).expect("diagram values lie in the chain")
    };
    let mut found = None;
    let diagrams = chain_diagrams(q, chain, &mut |a| {
        if q.premises.iter().all(|e| holds(e, &a)) && !holds(&q.conclusion, &a) {
            found = Some(a);
            true
        } else {
            false
        }
    });
    match found {
        Some(assignment) => {
            let cm = GodelCountermodel { chain: chain.clone(), assignment };
            assert!(cm.refutes(q), "countermodel failed re-validation");
            Verdict::No(cm)
        }
        None => Verdict::Yes(DiagramCertificate { chains: vec![chain.clone()], diagrams }),
    }
}

/// Admissibility in an extension equals validity in its generating chain.
pub fn godel_admissible(rule: &Rule, ext: &GodelExtension) -> GodelVerdict {
    check_quasieq_in_chain(&rule.to_quasiequation(), &ext.generator())
}

/// Finite family of chains of the extension's variety that is refutation
/// complete for quasiequations over `constants` with `k` variables.
pub fn representative_chains(constants: &BTreeSet<Rational>, k: usize, ext: &GodelExtension) -> Vec<GodelChainSpec> {
    let bound = match ext {
        GodelExtension::RGr { r } => r.clone(),
        GodelExtension::RGpg { p, .. } => p.clone(),
    };
    let mut qs: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(constants.iter().filter(|q| !q.is_negative() && **q < Rational::one()).cloned())
        .collect();
    qs.sort();
    qs.dedup();

    let mut out = Vec::new();
    for (i, q) in qs.iter().enumerate() {
        if *q >= bound {
            break;
        }
        let next = qs.get(i + 1).cloned().unwrap_or_else(Rational::one);
        let hi = next.min(bound.clone());
        out.push(GodelChainSpec::Qr { r: (q + hi) / Rational::from_integer(2.into()) });
    }

    let gammas: Vec<TailLen> = (0..=k as u32).map(TailLen::Finite).chain(std::iter::once(TailLen::Omega)).collect();
    let mut points: Vec<Rational> = qs.iter().filter(|q| **q < bound).cloned().collect();
    if let GodelExtension::RGpg { p, .. } = ext {
        points.push(p.clone());
    }
    points.sort();
    points.dedup();
    for p in points {
        for &gamma in &gammas {
            let allowed = match ext {
                GodelExtension::RGr { r } => p < *r,
                GodelExtension::RGpg { p: ep, gamma: eg } => p < *ep || gamma <= *eg,
            };
            if allowed {
                out.push(GodelChainSpec::Qpg { p: p.clone(), gamma });
            }
        }
    }
    out
}

/// Derivability in an extension equals validity in every chain of its
/// variety; decided over [`representative_chains`].
pub fn godel_derivable(rule: &Rule, ext: &GodelExtension) -> GodelVerdict {
    let q = rule.to_quasiequation();
    let chains = representative_chains(&q.constants(), q.variables().len(), ext);
    let mut diagrams = 0;
    for chain in &chains {
        match check_quasieq_in_chain(&q, chain) {
            Verdict::Yes(c) => diagrams += c.diagrams,
            other => return other,
        }
    }
    Verdict::Yes(DiagramCertificate { chains, diagrams })
}

/// Inclusion of generated varieties.
pub fn variety_leq(g1: &VarietyGen, g2: &VarietyGen) -> bool {
    use GodelChainSpec::{Qpg, Qr};
    match (g1, g2) {
        (Qr { r: r1 }, Qr { r: r2 }) => r1 <= r2,
        (Qr { r }, Qpg { p, .. }) => r <= p,
        (Qpg { p, .. }, Qr { r }) => p < r,
        (Qpg { p: p1, gamma: g1 }, Qpg { p: p2, gamma: g2 }) => p1 < p2 || (p1 == p2 && g1 <= g2),
    }
}

/// Equational axiomatization of a generated variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyAxioms {
    /// Lower end of the interval of constants `q` with axiom `c_q ≈ 1`.
    pub lower: Rational,
    pub lower_closed: bool,
    /// The schema instantiated on the mentioned constants.
    pub instances: Vec<Equation>,
    /// `⋁_{0≤i<j≤n+2} (c_p ∨ x_i) ↔ (c_p ∨ x_j) ≈ 1` for finite `γ = n`.
    pub width: Option<Equation>,
}

pub fn width_formula(p: &Rational, n: u32) -> Formula {
    let c = Formula::constant(p.clone()).expect("p in [0,1]");
    let arm = |i: u32| Formula::or(c.clone(), Formula::Var(i));
    let mut disjuncts = Vec::new();
    for i in 0..=n + 2 {
        for j in i + 1..=n + 2 {
            disjuncts.push(Formula::equiv(arm(i), arm(j)));
        }
    }
    Formula::join_all(disjuncts)
}

pub fn variety_axioms(g: &VarietyGen, mentioned: &BTreeSet<Rational>) -> VarietyAxioms {
    let (lower, lower_closed, width) = match g {
        GodelChainSpec::Qr { r } => (r.clone(), true, None),
        GodelChainSpec::Qpg { p, gamma } => {
            let width = match gamma {
                TailLen::Finite(n) => Some(Equation::is_one(width_formula(p, *n))),
                TailLen::Omega => None,
            };
            (p.clone(), false, width)
        }
    };
    let instances = mentioned
        .iter()
        .filter(|q| **q <= Rational::one() && if lower_closed { **q >= lower } else { **q > lower })
        .map(|q| Equation::is_one(Formula::constant(q.clone()).expect("q in [0,1]")))
        .collect();
    VarietyAxioms { lower, lower_closed, instances, width }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyTarget {
    Extension(GodelExtension),
    /// The quasivariety generated by a single chain.
    ChainQuasivariety(GodelChainSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingWitness {
    pub rule: Rule,
    pub admissible: DiagramCertificate,
    pub refutation: GodelCountermodel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub sc: bool,
    pub hsc: bool,
    pub asc: bool,
    pub psc: bool,
    pub witness: Option<SeparatingWitness>,
}

/// `c_q ∨ x1 ▷ x1`
pub fn constant_join_rule(q: &Rational) -> Rule {
    let c = Formula::constant(q.clone()).expect("q in [0,1]");
    Rule::new(vec![Formula::or(c, Formula::Var(1))], Formula::Var(1))
}

/// Checks that `rule` is admissible but not derivable in `ext`.
pub fn separates(rule: &Rule, ext: &GodelExtension) -> Option<SeparatingWitness> {
    let admissible = godel_admissible(rule, ext).yes()?;
    let refutation = godel_derivable(rule, ext).no()?;
    Some(SeparatingWitness { rule: rule.clone(), admissible, refutation })
}

/// Searches the rules `c_q ∨ z ▷ z` over the first `budget` rationals.
pub fn separating_rule_search(ext: &GodelExtension, budget: usize) -> Option<SeparatingWitness> {
    enumerate_rationals(budget).iter().find_map(|q| separates(&constant_join_rule(q), ext))
}

pub fn classify_extension(target: &ClassifyTarget) -> Classification {
    let all = |flag: bool, witness| Classification { sc: flag, hsc: flag, asc: flag, psc: flag, witness };
    match target {
        ClassifyTarget::ChainQuasivariety(_) => all(true, None),
        ClassifyTarget::Extension(GodelExtension::RGpg { p, .. }) if p.is_zero() => all(true, None),
        ClassifyTarget::Extension(ext) => {
            let candidate = match ext {
                GodelExtension::RGr { r } => r / Rational::from_integer(2.into()),
                GodelExtension::RGpg { p, .. } => p.clone(),
            };
            let witness = separates(&constant_join_rule(&candidate), ext).or_else(|| separating_rule_search(ext, 256));
            all(false, witness)
        }
    }
}
