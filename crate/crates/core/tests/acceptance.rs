//! Acceptance criteria 1 to 9. Runs without the libtest harness so that the
//! `criterion N: PASS|FAIL` lines, with measured runtime against the pinned
//! limit, always reach the output. Exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratlogic::chains::{
    check_bookkeeping_algebra, delta_holds, eval_godel, eval_in_ax, eval_luk_rational, gamma_formula, BlAlgebra,
    BooleanTrivial, FiniteMv, Flavor, GadgetAlgebra, GodelChainSpec, GodelValue, LukasiewiczQ, ProductQ, SqrtRational,
    TailLen, TrivializedProductQ,
};
use ratlogic::formula::{parse_rule, Equation, Formula, Quasiequation, Rule};
use ratlogic::godel_engine::{
    check_quasieq_in_chain, godel_admissible, godel_derivable, variety_axioms, variety_leq, GodelExtension,
};
use ratlogic::luk_engine::{
    finite_chain_refute, luk_admissible, luk_check_quasieq, luk_consequence, luk_refutes, LukOptions,
};
use ratlogic::numerics::{nth_root_rational, rat, Rational};
use ratlogic::product_engine::{
    product_admissible, product_derivable_sound, psc_rule_form, refutes_in, BaseRule, DovetailBudget, PscMismatch,
    RpaChain,
};
use ratlogic::verdict::Verdict;

const LIMIT_1: Duration = Duration::from_secs(10);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(60);
const LIMIT_4: Duration = Duration::from_secs(300);
const LIMIT_5: Duration = Duration::from_secs(1);
const LIMIT_5_AXIOMS: Duration = Duration::from_secs(30);
const LIMIT_6: Duration = Duration::from_secs(300);
const LIMIT_7: Duration = Duration::from_secs(1);
const LIMIT_8: Duration = Duration::from_secs(30);
const LIMIT_9: Duration = Duration::from_secs(1);

const RULES: usize = 200;
const QUASIEQUATIONS: usize = 2000;

fn criterion(n: u32, limit: Duration, body: impl FnOnce() -> (Vec<String>, String)) -> bool {
    check(&format!("criterion {n}"), limit, body)
}

/// Runs `body`, which returns a list of failure descriptions and a summary,
/// and prints one result line. Passing needs no failures and a runtime
/// within `limit`; a panic in `body` counts as a failure.
fn check(label: &str, limit: Duration, body: impl FnOnce() -> (Vec<String>, String)) -> bool {
    let start = Instant::now();
    let (failures, summary) = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body))
        .unwrap_or_else(|_| (vec!["panicked".to_string()], "aborted".to_string()));
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed <= limit;
    println!(
        "{label}: {} ({summary}; {:.2}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    ok
}

fn rule(text: &str) -> Rule {
    parse_rule(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Rationals in `[0,1]` with denominator at most `d`, ascending.
fn unit_grid(d: i64) -> Vec<Rational> {
    let set: BTreeSet<Rational> = (1..=d).flat_map(|den| (0..=den).map(move |k| rat(k, den))).collect();
    set.into_iter().collect()
}

/// Random formula with exactly `size` binary connectives over `x1..=vars`.
/// Constants, when allowed, have denominators at most `max_den`.
fn random_formula(rng: &mut ChaCha8Rng, vars: u32, size: usize, max_den: Option<i64>) -> Formula {
    if size == 0 {
        let pick = rng.gen_range(0..10);
        return match (pick, max_den) {
            (0, _) => Formula::Zero,
            (1, _) => Formula::One,
            (2 | 3, Some(d)) => {
                let den = rng.gen_range(2..=d);
                Formula::constant(rat(rng.gen_range(1..den), den)).unwrap()
            }
            _ => Formula::Var(rng.gen_range(1..=vars)),
        };
    }
    let left = rng.gen_range(0..size);
    let a = random_formula(rng, vars, left, max_den);
    let b = random_formula(rng, vars, size - 1 - left, max_den);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::fuse(a, b),
        _ => Formula::imp(a, b),
    }
}

/// Splits `total` connectives over `parts` formulas at random.
fn split(rng: &mut ChaCha8Rng, total: usize, parts: usize) -> Vec<usize> {
    let mut out = vec![0; parts];
    for _ in 0..total {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

fn random_rule(rng: &mut ChaCha8Rng, vars: u32, max_size: usize, max_den: Option<i64>) -> Rule {
    let premises = rng.gen_range(0..=2);
    let total = rng.gen_range(0..=max_size);
    let sizes = split(rng, total, premises + 1);
    let mut fs: Vec<Formula> = sizes.iter().map(|&s| random_formula(rng, vars, s, max_den)).collect();
    let conclusion = fs.pop().unwrap();
    Rule::new(fs, conclusion)
}

fn random_quasiequation(rng: &mut ChaCha8Rng, vars: u32, max_size: usize, max_den: Option<i64>) -> Quasiequation {
    let premises = rng.gen_range(0..=2);
    let total = rng.gen_range(0..=max_size);
    let sizes = split(rng, total, 2 * (premises + 1));
    let mut eqs: Vec<Equation> = sizes
        .chunks(2)
        .map(|s| Equation::new(random_formula(rng, vars, s[0], max_den), random_formula(rng, vars, s[1], max_den)))
        .collect();
    let conclusion = eqs.pop().unwrap();
    Quasiequation::new(eqs, conclusion)
}

/// All assignments of `values` to `vars`.
fn assignments<V: Clone>(vars: &[u32], values: &[V]) -> Vec<BTreeMap<u32, V>> {
    let mut out = vec![BTreeMap::new()];
    for &v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                values.iter().map(move |x| {
                    let mut a = a.clone();
                    a.insert(v, x.clone());
                    a
                })
            })
            .collect();
    }
    out
}

fn luk_grid_refutes(q: &Quasiequation, grid: &[Rational]) -> Option<BTreeMap<u32, Rational>> {
    let vars: Vec<u32> = q.variables().into_iter().collect();
    let holds = |e: &Equation, a: &BTreeMap<u32, Rational>| {
        eval_luk_rational(&e.lhs, a).unwrap() == eval_luk_rational(&e.rhs, a).unwrap()
    };
    assignments(&vars, grid).into_iter().find(|a| q.premises.iter().all(|e| holds(e, a)) && !holds(&q.conclusion, a))
}

fn criterion_1_base_rule_admissibility() -> bool {
    criterion(1, LIMIT_1, || {
        let budget = DovetailBudget::default();
        let mut failures = Vec::new();
        let (mut yes, mut no) = (0, 0);
        for p in unit_grid(10) {
            for n in 1..=4 {
                let r = BaseRule::RootJoin { p: p.clone(), n }.to_rule();
                let irrational = nth_root_rational(&p, n).is_none();
                match (irrational, product_admissible(&r, &budget)) {
                    (true, Verdict::Yes(_)) => yes += 1,
                    (false, Verdict::No(a)) if refutes_in(&ProductQ, &r.to_quasiequation(), &a) => no += 1,
                    (_, v) => failures.push(format!("p={p} n={n}: {:?}", v.outcome())),
                }
            }
        }
        (failures, format!("{yes} admissible, {no} refuted"))
    })
}

fn criterion_2_structural_incompleteness_witnesses() -> bool {
    criterion(2, LIMIT_2, || {
        let r = rule("#1/2 \\/ x1 |- x1");
        let q = r.to_quasiequation();
        let mut failures = Vec::new();
        let rg = GodelExtension::rg();
        if !godel_admissible(&r, &rg).is_yes() {
            failures.push("RG: not admissible".to_string());
        }
        match godel_derivable(&r, &rg) {
            Verdict::No(c) if c.chain == GodelChainSpec::qr(rat(1, 4)).unwrap() && c.refutes(&q) => {}
            v => failures.push(format!("RG derivability: {:?}", v.outcome())),
        }
        let budget = DovetailBudget::default();
        if !product_admissible(&r, &budget).is_yes() {
            failures.push("RP: not admissible".to_string());
        }
        match product_derivable_sound(&r, &budget) {
            Verdict::No(c) if c.chain == RpaChain::Trivialized && c.refutes(&q) => {}
            v => failures.push(format!("RP derivability: {:?}", v.outcome())),
        }
        (failures, "RG witness Q_1/4, RP witness trivialized chain".to_string())
    })
}

fn criterion_3_luk_admissible_equals_consequence() -> bool {
    criterion(3, LIMIT_3, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
        let grid = unit_grid(6);
        let mut failures = Vec::new();
        let (mut yes, mut no) = (0, 0);
        for _ in 0..RULES {
            let r = random_rule(&mut rng, 3, 8, Some(6));
            let q = r.to_quasiequation();
            let (adm, cons) = (luk_admissible(&r), luk_consequence(&r));
            if adm.outcome() != cons.outcome() {
                failures.push(format!("{r}: admissible {:?}, consequence {:?}", adm.outcome(), cons.outcome()));
            }
            for v in [adm, cons] {
                match v {
                    Verdict::No(a) if luk_refutes(&q, &a) => no += 1,
                    Verdict::No(a) => failures.push(format!("{r}: countermodel {a:?} does not refute")),
                    Verdict::Yes(_) => match luk_grid_refutes(&q, &grid) {
                        None => yes += 1,
                        Some(a) => failures.push(format!("{r}: valid, but refuted at {a:?}")),
                    },
                    Verdict::Unknown(_) => failures.push(format!("{r}: unknown")),
                }
            }
        }
        (failures, format!("{RULES} rules, {} valid, {} refuted", yes / 2, no / 2))
    })
}

/// Concrete carrier of `Q_p^γ` for finite `γ`: rationals `k/36 <= p`, the
/// tail and the top. For two variables and anchors on multiples of 1/12
/// this realizes every order diagram.
fn concrete_qpg(p: &Rational, gamma: u32) -> Vec<GodelValue> {
    (0..=36)
        .map(|k| rat(k, 36))
        .filter(|q| q <= p)
        .map(GodelValue::Rat)
        .chain((0..gamma).map(GodelValue::Tail))
        .chain(std::iter::once(GodelValue::Top))
        .collect()
}

fn criterion_4_godel_order_abstraction() -> bool {
    criterion(4, LIMIT_4, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
        let chains: Vec<(Rational, u32)> = unit_grid(4)
            .into_iter()
            .filter(|p| *p < rat(1, 1))
            .flat_map(|p| (0..=3).map(move |g| (p.clone(), g)))
            .collect();
        let mut failures = Vec::new();
        let (mut checks, mut refuted) = (0, 0);
        for _ in 0..QUASIEQUATIONS {
            let q = random_quasiequation(&mut rng, 2, 6, Some(4));
            let vars: Vec<u32> = q.variables().into_iter().collect();
            for (p, g) in &chains {
                let chain = GodelChainSpec::qpg(p.clone(), TailLen::Finite(*g)).unwrap();
                let holds = |e: &Equation, a: &BTreeMap<u32, GodelValue>| {
                    eval_godel(&e.lhs, &chain, a).unwrap() == eval_godel(&e.rhs, &chain, a).unwrap()
                };
                let concrete = assignments(&vars, &concrete_qpg(p, *g))
                    .into_iter()
                    .any(|a| q.premises.iter().all(|e| holds(e, &a)) && !holds(&q.conclusion, &a));
                let abstracted = check_quasieq_in_chain(&q, &chain);
                checks += 1;
                refuted += usize::from(concrete);
                if abstracted.is_yes() == concrete {
                    failures.push(format!("{q} on {chain}: concrete refutation {concrete}"));
                }
            }
        }
        (failures, format!("{checks} checks, {refuted} refuted, zero disagreements required"))
    })
}

fn variety_generators() -> Vec<GodelChainSpec> {
    let mut out: Vec<GodelChainSpec> = [rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)]
        .into_iter()
        .map(|r| GodelChainSpec::qr(r).unwrap())
        .collect();
    for p in [rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3)] {
        for g in [TailLen::Finite(0), TailLen::Finite(1), TailLen::Omega] {
            out.push(GodelChainSpec::qpg(p.clone(), g).unwrap());
        }
    }
    for g in [TailLen::Finite(0), TailLen::Finite(2), TailLen::Omega] {
        out.push(GodelChainSpec::qpg(rat(1, 4), g).unwrap());
    }
    out
}

/// The four displayed side conditions, one per pair of generator kinds.
fn expected_leq(a: &GodelChainSpec, b: &GodelChainSpec) -> bool {
    match (a, b) {
        (GodelChainSpec::Qr { r: r1 }, GodelChainSpec::Qr { r: r2 }) => r1 <= r2,
        (GodelChainSpec::Qr { r }, GodelChainSpec::Qpg { p, .. }) => r <= p,
        (GodelChainSpec::Qpg { p, .. }, GodelChainSpec::Qr { r }) => p < r,
        (GodelChainSpec::Qpg { p: p1, gamma: g1 }, GodelChainSpec::Qpg { p: p2, gamma: g2 }) => {
            let tail_fits = match (g1, g2) {
                (_, TailLen::Omega) => true,
                (TailLen::Omega, TailLen::Finite(_)) => false,
                (TailLen::Finite(m), TailLen::Finite(n)) => m <= n,
            };
            p1 < p2 || (p1 == p2 && tail_fits)
        }
    }
}

fn criterion_5_variety_lattice() -> bool {
    criterion(5, LIMIT_5, || {
        let gens = variety_generators();
        let mut failures = Vec::new();
        let mut below = 0;
        for a in &gens {
            for b in &gens {
                let got = variety_leq(a, b);
                below += usize::from(got);
                if got != expected_leq(a, b) {
                    failures.push(format!("V({a}) <= V({b}): got {got}"));
                }
            }
        }
        (failures, format!("{}x{} grid, {below} inclusions", gens.len(), gens.len()))
    })
}

/// Second route for criterion 5: inclusion holds iff the first generator
/// satisfies the axioms of the second variety, instantiated on a grid of
/// constants fine enough to separate every pair of parameters.
fn axiom_route_failures(gens: &[GodelChainSpec]) -> Vec<String> {
    let mut failures = Vec::new();
    let mentioned: BTreeSet<Rational> = (0..=24).map(|k| rat(k, 24)).collect();
    for a in gens {
        for b in gens {
            let ax = variety_axioms(b, &mentioned);
            let satisfied = ax
                .instances
                .iter()
                .chain(ax.width.iter())
                .all(|e| check_quasieq_in_chain(&Quasiequation::new(vec![], e.clone()), a).is_yes());
            if variety_leq(a, b) != satisfied {
                failures.push(format!("V({a}) <= V({b}): axioms satisfied {satisfied}"));
            }
        }
    }
    failures
}

fn criterion_6_luk_finite_chain_oracle() -> bool {
    criterion(6, LIMIT_6, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
        let mut failures = Vec::new();
        let (mut yes, mut no) = (0, 0);
        for _ in 0..QUASIEQUATIONS {
            let q = random_quasiequation(&mut rng, 2, 6, None);
            let finite = finite_chain_refute(&q, 12).unwrap();
            match (luk_check_quasieq(&q, LukOptions::default()), finite) {
                (Verdict::No(a), Some(_)) if luk_refutes(&q, &a) => no += 1,
                (Verdict::Yes(_), None) => yes += 1,
                (v, hit) => failures.push(format!("{q}: {:?}, finite hit {hit:?}", v.outcome())),
            }
        }
        (failures, format!("{QUASIEQUATIONS} quasiequations, {yes} valid, {no} refuted"))
    })
}

fn criterion_7_gadget() -> bool {
    criterion(7, LIMIT_7, || {
        let mut failures = Vec::new();
        for x in [vec![2u64], vec![3], vec![2, 3], vec![2, 3, 5]] {
            let x: BTreeSet<u64> = x.into_iter().collect();
            let alg = GadgetAlgebra::new(&x).unwrap();
            let inv = alg.inv_x();
            let at = BTreeMap::from([(0, inv.clone())]);
            let one = alg.one();
            if eval_in_ax(&gamma_formula(&x, 0), &x, &at).unwrap() != one {
                failures.push(format!("Gamma_{x:?}(inv) != 1"));
            }
            for p in &x {
                let mut rest = x.clone();
                rest.remove(p);
                if eval_in_ax(&gamma_formula(&rest, 0), &x, &at).unwrap() == one {
                    failures.push(format!("Gamma_{rest:?}(inv) = 1 in A_{x:?}"));
                }
            }
            if !delta_holds(&alg, &inv).unwrap() {
                failures.push(format!("Delta_{x:?}(inv) fails"));
            }
        }
        (failures, "X in {2}, {3}, {2,3}, {2,3,5}".to_string())
    })
}

const BL_CASES: usize = 10_000;

fn bl_law_failures<A: BlAlgebra>(name: &str, alg: &A, mut sample: impl FnMut() -> A::Value) -> Vec<String> {
    let one = alg.one();
    let mut out = Vec::new();
    for _ in 0..BL_CASES {
        let (a, b, c) = (sample(), sample(), sample());
        if alg.leq(&alg.fuse(&a, &b), &c) != alg.leq(&a, &alg.imp(&b, &c)) {
            out.push(format!("{name}: residuation at {a:?} {b:?} {c:?}"));
        }
        if alg.join(&alg.imp(&a, &c), &alg.imp(&c, &a)) != one {
            out.push(format!("{name}: prelinearity at {a:?} {c:?}"));
        }
        if alg.meet(&a, &c) != alg.fuse(&a, &alg.imp(&a, &c)) {
            out.push(format!("{name}: divisibility at {a:?} {c:?}"));
        }
    }
    out
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

fn criterion_8_bl_laws_and_bookkeeping() -> bool {
    criterion(8, LIMIT_8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA8);
        let rng = &mut rng;
        let mut failures = Vec::new();
        failures.extend(bl_law_failures("Lukasiewicz", &LukasiewiczQ, || random_unit(rng)));
        failures.extend(bl_law_failures("product", &ProductQ, || random_unit(rng)));
        failures.extend(bl_law_failures("trivialized product", &TrivializedProductQ, || random_unit(rng)));
        failures.extend(bl_law_failures("Boolean", &BooleanTrivial, || rng.gen_bool(0.5)));
        failures.extend(bl_law_failures("MV_6", &FiniteMv { n: 6 }, || rng.gen_range(0..=6)));
        let godel = [
            GodelChainSpec::standard(),
            GodelChainSpec::qr(rat(1, 2)).unwrap(),
            GodelChainSpec::qpg(rat(1, 3), TailLen::Finite(2)).unwrap(),
            GodelChainSpec::qpg(rat(0, 1), TailLen::Omega).unwrap(),
        ];
        for chain in &godel {
            let mut r = ChaCha8Rng::seed_from_u64(5);
            failures.extend(bl_law_failures(&chain.to_string(), chain, || random_godel(&mut r, chain)));
        }
        let gadget = GadgetAlgebra::new(&[2, 3].into_iter().collect()).unwrap();
        failures.extend(bl_law_failures("A_{2,3}", &gadget, || vec![random_sqrt(rng), random_sqrt(rng)]));

        let consts = unit_grid(12);
        let mut book = |name: &str, v: Vec<ratlogic::chains::Violation>| {
            failures.extend(v.into_iter().map(|v| format!("{name}: {v:?}")));
        };
        book("Lukasiewicz", check_bookkeeping_algebra(&LukasiewiczQ, &consts, Flavor::Luk));
        book("product", check_bookkeeping_algebra(&ProductQ, &consts, Flavor::Prod));
        book("trivialized product", check_bookkeeping_algebra(&TrivializedProductQ, &consts, Flavor::Prod));
        book("Boolean", check_bookkeeping_algebra(&BooleanTrivial, &consts, Flavor::Prod));
        for chain in &godel {
            book(&chain.to_string(), check_bookkeeping_algebra(chain, &consts, Flavor::Godel));
        }
        (failures, format!("{BL_CASES} cases per algebra, {} constants", consts.len()))
    })
}

fn criterion_9_psc_recognizer() -> bool {
    criterion(9, LIMIT_9, || {
        let positive = [
            ("#1/2 \\/ (x1^2 <-> #1/2) |- 0", 1),
            ("#1/3 |- 0", 0),
            ("#1/2 \\/ (#1/2 <-> x1^2) |- 0", 1),
            ("(x1^2 <-> #1/2) \\/ #1/3 |- 0", 1),
            ("#1/4 \\/ (x1^3 <-> #1/4) |- 0", 1),
            ("#1/5 \\/ ((x1^2 <-> #1/2) \\/ (x2^3 <-> #1/3)) |- 0", 2),
            ("(#1/5 \\/ (x1^2 <-> #1/2)) \\/ (x2^3 <-> #1/3) |- 0", 2),
            ("#2/3 \\/ (x1^4 <-> #1/4) |- 0", 1),
            ("#1/2 \\/ (x1^2 <-> #3/4) \\/ (x2^2 <-> #2/3) |- 0", 2),
            ("#1/7 \\/ (x1^2 <-> #1/8) \\/ (x2^3 <-> #1/4) \\/ (x3^2 <-> #1/3) |- 0", 3),
        ];
        let negative: [(&str, fn(&PscMismatch) -> bool); 10] = [
            ("#1/2 \\/ (x1^2 <-> #1/4) |- 0", |m| *m == PscMismatch::RationalRoot(rat(1, 4), 2)),
            ("#1/2 \\/ (x1^3 <-> #1/8) |- 0", |m| *m == PscMismatch::RationalRoot(rat(1, 8), 3)),
            ("#1/3 \\/ (#1/16 <-> x1^4) |- 0", |m| *m == PscMismatch::RationalRoot(rat(1, 16), 4)),
            ("#1/3 \\/ (x1^2 <-> #1/2) |- x1", |m| *m == PscMismatch::Conclusion),
            ("#1/3, #1/2 |- 0", |m| *m == PscMismatch::PremiseCount),
            ("(x1^2 <-> #1/2) |- 0", |m| *m == PscMismatch::ConstantDisjunct),
            ("#1/3 \\/ #1/5 \\/ (x1^2 <-> #1/2) |- 0", |m| *m == PscMismatch::ConstantDisjunct),
            ("#1/3 \\/ (x1^2 <-> #1/2) \\/ (x1^3 <-> #1/3) |- 0", |m| *m == PscMismatch::RepeatedVariable(1)),
            ("#1/3 \\/ ((x1 /\\ x2)^2 <-> #1/2) |- 0", |m| matches!(m, PscMismatch::Disjunct(_))),
            ("#1/3 \\/ (x1^2 -> #1/2) |- 0", |m| matches!(m, PscMismatch::Disjunct(_))),
        ];
        let mut failures = Vec::new();
        for (text, roots) in positive {
            match psc_rule_form(&rule(text)) {
                Ok(form) if form.roots.len() == roots => {}
                other => failures.push(format!("{text}: {other:?}")),
            }
        }
        for (text, expected) in negative {
            match psc_rule_form(&rule(text)) {
                Err(m) if expected(&m) => {}
                other => failures.push(format!("{text}: {other:?}")),
            }
        }
        (failures, "10 positive, 10 negative".to_string())
    })
}

fn main() {
    let results = [
        criterion_1_base_rule_admissibility(),
        criterion_2_structural_incompleteness_witnesses(),
        criterion_3_luk_admissible_equals_consequence(),
        criterion_4_godel_order_abstraction(),
        criterion_5_variety_lattice(),
        check("criterion 5 axiom route", LIMIT_5_AXIOMS, || {
            (axiom_route_failures(&variety_generators()), "inclusion iff the axioms hold".to_string())
        }),
        criterion_6_luk_finite_chain_oracle(),
        criterion_7_gadget(),
        criterion_8_bl_laws_and_bookkeeping(),
        criterion_9_psc_recognizer(),
    ];
    let passed = results.iter().filter(|ok| **ok).count();
    println!("acceptance: {passed}/{} checks passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
