use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::{json, Value};

use ratlogic::chains::{
    check_bookkeeping, delta_holds, eval_in_ax, evaluate_map, gamma_formula, BlAlgebra, BooleanTrivial, FiniteMv,
    Flavor, GadgetAlgebra, GodelValue, InterpretationTable, LukasiewiczQ, ProductQ, TrivializedProductQ,
};
use ratlogic::formula::{parse_formula, parse_rule, Formula, Rule};
use ratlogic::godel_engine::{
    classify_extension, godel_admissible, godel_derivable, variety_axioms as axioms, variety_leq, ClassifyTarget,
    GodelExtension,
};
use ratlogic::luk_engine::{luk_admissible, luk_consequence, luk_refutes};
use ratlogic::numerics::{in_unit_interval, parse_rational, Rational};
use ratlogic::product_engine::{
    check_derivation, product_admissible, product_derivable_sound, AdmissibilityCertificate, DovetailBudget,
};
use ratlogic::verdict::Verdict;

use crate::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[repr(u8)]
pub enum Exit {
    Definitive = 0,
    InputError = 1,
    Unknown = 2,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicChoice {
    Luk,
    Product,
    Godel,
}

pub fn budget(tuples: u64, depth: u32, steps: u64) -> Result<DovetailBudget, CliError> {
    DovetailBudget::new(tuples, depth, steps).map_err(input)
}

fn status(derivable: bool, yes: bool) -> &'static str {
    match (derivable, yes) {
        (false, true) => "admissible",
        (false, false) => "not_admissible",
        (true, true) => "derivable",
        (true, false) => "not_derivable",
    }
}

fn verdict_doc<Y, N>(
    rule: &Rule,
    derivable: bool,
    v: Verdict<Y, N>,
    certificate: impl Fn(&Y) -> Value,
    witness: impl Fn(&N) -> Value,
) -> (Value, Exit) {
    let rule = rule.to_string();
    match v {
        Verdict::Yes(y) => (
            json!({ "rule": rule, "status": status(derivable, true), "certificate": certificate(&y) }),
            Exit::Definitive,
        ),
        Verdict::No(n) => {
            (json!({ "rule": rule, "status": status(derivable, false), "witness": witness(&n) }), Exit::Definitive)
        }
        Verdict::Unknown(e) => {
            (json!({ "rule": rule, "status": "unknown", "exhausted": render::exhausted(&e) }), Exit::Unknown)
        }
    }
}

fn check_rule(
    logic: LogicChoice,
    derivable: bool,
    ext: Option<&str>,
    rule: &Rule,
    budget: &DovetailBudget,
) -> Result<(Value, Exit), CliError> {
    if ext.is_some() && logic != LogicChoice::Godel {
        return Err(input("--ext is only meaningful for --logic RG"));
    }
    let q = rule.to_quasiequation();
    let doc = match logic {
        LogicChoice::Luk => {
            let v = if derivable { luk_consequence(rule) } else { luk_admissible(rule) };
            if let Verdict::No(a) = &v {
                assert!(luk_refutes(&q, a), "countermodel failed re-validation");
            }
            verdict_doc(rule, derivable, v, render::luk_certificate, |a| json!({ "assignment": render::assignment(a) }))
        }
        LogicChoice::Godel => {
            let ext = match ext {
                Some(text) => GodelExtension::parse(text).map_err(input)?,
                None => GodelExtension::rg(),
            };
            let v = if derivable { godel_derivable(rule, &ext) } else { godel_admissible(rule, &ext) };
            if let Verdict::No(c) = &v {
                assert!(c.refutes(&q), "countermodel failed re-validation");
            }
            verdict_doc(rule, derivable, v, render::diagram_certificate, render::godel_countermodel)
        }
        LogicChoice::Product if derivable => {
            let v = product_derivable_sound(rule, budget);
            match &v {
                Verdict::Yes(d) => assert!(check_derivation(rule, d, false).is_ok(), "derivation failed replay"),
                Verdict::No(r) => assert!(r.refutes(&q), "countermodel failed re-validation"),
                Verdict::Unknown(_) => {}
            }
            verdict_doc(rule, derivable, v, render::derivation, render::chain_refutation)
        }
        LogicChoice::Product => {
            let v = product_admissible(rule, budget);
            match &v {
                Verdict::Yes(AdmissibilityCertificate::Derivation(d)) => {
                    assert!(check_derivation(rule, d, true).is_ok(), "derivation failed replay")
                }
                Verdict::No(a) => {
                    assert!(ratlogic::product_engine::refutes_in(&ProductQ, &q, a), "countermodel failed re-validation")
                }
                _ => {}
            }
            verdict_doc(
                rule,
                derivable,
                v,
                render::admissibility_certificate,
                |a| json!({ "assignment": render::assignment(a) }),
            )
        }
    };
    Ok(doc)
}

pub fn check(
    logic: LogicChoice,
    derivable: bool,
    ext: Option<&str>,
    text: &str,
    budget: &DovetailBudget,
) -> Result<(Value, Exit), CliError> {
    let rule = parse_rule(text).map_err(input)?;
    check_rule(logic, derivable, ext, &rule, budget)
}

pub fn check_file(
    logic: LogicChoice,
    derivable: bool,
    ext: Option<&str>,
    path: &Path,
    budget: &DovetailBudget,
) -> Result<(Value, Exit), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let mut results = Vec::new();
    let mut exit = Exit::Definitive;
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let (mut doc, code) = match check(logic, derivable, ext, line, budget) {
            Ok(out) => out,
            Err(e) => (json!({ "rule": line, "status": "error", "error": e.to_string() }), Exit::InputError),
        };
        doc["line"] = json!(line_no + 1);
        results.push(doc);
        exit = match (exit, code) {
            (Exit::InputError, _) | (_, Exit::InputError) => Exit::InputError,
            (a, b) => a.max(b),
        };
    }
    Ok((json!({ "results": results }), exit))
}

fn parse_assignment<V>(text: &str, value: impl Fn(&str) -> Result<V, CliError>) -> Result<BTreeMap<u32, V>, CliError> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (var, val) = pair.split_once('=').ok_or_else(|| input(format!("expected xK=value, found {pair:?}")))?;
        let index: u32 = var
            .trim()
            .strip_prefix('x')
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| input(format!("bad variable {var:?}")))?;
        out.insert(index, value(val.trim())?);
    }
    Ok(out)
}

fn unit_rational(s: &str) -> Result<Rational, CliError> {
    let q = parse_rational(s).map_err(input)?;
    if !in_unit_interval(&q) {
        return Err(input(format!("{s} is not in [0,1]")));
    }
    Ok(q)
}

fn run_eval<A: BlAlgebra>(
    alg: &A,
    f: &Formula,
    a: &BTreeMap<u32, A::Value>,
    show: impl Fn(&A::Value) -> String,
) -> Result<(Value, Exit), CliError> {
    let v = evaluate_map(alg, f, a).map_err(input)?;
    Ok((json!({ "formula": f.to_string(), "value": show(&v) }), Exit::Definitive))
}

pub fn eval(algebra: &str, formula: &str, assign: &str) -> Result<(Value, Exit), CliError> {
    let f = parse_formula(formula).map_err(input)?;
    let show = |q: &Rational| q.to_string();
    match algebra {
        "luk" => run_eval(&LukasiewiczQ, &f, &parse_assignment(assign, unit_rational)?, show),
        "product" => run_eval(&ProductQ, &f, &parse_assignment(assign, unit_rational)?, show),
        "product-trivialized" => run_eval(&TrivializedProductQ, &f, &parse_assignment(assign, unit_rational)?, show),
        "boolean" => {
            let a = parse_assignment(assign, |s| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(input(format!("{s} is not 0 or 1"))),
            })?;
            run_eval(&BooleanTrivial, &f, &a, |b| if *b { "1" } else { "0" }.to_string())
        }
        _ => {
            if let Some(n) = algebra.strip_prefix("mv:") {
                let n: u32 =
                    n.parse().ok().filter(|n| *n >= 1).ok_or_else(|| input(format!("bad chain size {n:?}")))?;
                let chain = FiniteMv { n };
                let a = parse_assignment(assign, |s| {
                    let q = unit_rational(s)?;
                    let k = &q * Rational::from_integer(n.into());
                    k.is_integer()
                        .then(|| u32::try_from(k.to_integer()).expect("k <= n"))
                        .ok_or_else(|| input(format!("{s} is not in the chain with {} elements", n + 1)))
                })?;
                return run_eval(&chain, &f, &a, |k| Rational::new((*k).into(), n.into()).to_string());
            }
            if let Some(spec) = algebra.strip_prefix("godel:") {
                let chain = GodelExtension::parse(spec).map_err(input)?.generator();
                let a = parse_assignment(assign, |s| {
                    godel_value(s)
                        .filter(|v| chain.contains(v))
                        .ok_or_else(|| input(format!("{s} is not an element of {chain}")))
                })?;
                return run_eval(&chain, &f, &a, |v: &GodelValue| v.to_string());
            }
            Err(input(format!("unknown algebra {algebra:?}")))
        }
    }
}

/// `1` or `top` for the top element, `tK` for tail points, else a rational.
fn godel_value(s: &str) -> Option<GodelValue> {
    match s {
        "1" | "top" => Some(GodelValue::Top),
        _ => match s.strip_prefix('t') {
            Some(k) => k.parse().ok().map(GodelValue::Tail),
            None => parse_rational(s).ok().map(GodelValue::Rat),
        },
    }
}

fn chain(text: &str) -> Result<ratlogic::chains::GodelChainSpec, CliError> {
    Ok(GodelExtension::parse(text).map_err(input)?.generator())
}

pub fn variety_compare(g1: &str, g2: &str) -> Result<(Value, Exit), CliError> {
    let (a, b) = (chain(g1)?, chain(g2)?);
    let (leq, geq) = (variety_leq(&a, &b), variety_leq(&b, &a));
    let relation = match (leq, geq) {
        (true, true) => "equal",
        (true, false) => "below",
        (false, true) => "above",
        (false, false) => "incomparable",
    };
    Ok((
        json!({ "g1": a.to_string(), "g2": b.to_string(), "leq": leq, "geq": geq, "relation": relation }),
        Exit::Definitive,
    ))
}

pub fn variety_axioms(g: &str, mentioned: &str) -> Result<(Value, Exit), CliError> {
    let g = chain(g)?;
    let mentioned: BTreeSet<Rational> =
        mentioned.split(',').map(str::trim).filter(|s| !s.is_empty()).map(unit_rational).collect::<Result<_, _>>()?;
    let ax = axioms(&g, &mentioned);
    Ok((
        json!({
            "generator": g.to_string(),
            "lower": ax.lower.to_string(),
            "lower_closed": ax.lower_closed,
            "instances": ax.instances.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "width": ax.width.map(|e| e.to_string()),
        }),
        Exit::Definitive,
    ))
}

pub fn classify(ext: Option<&str>, chain_text: Option<&str>) -> Result<(Value, Exit), CliError> {
    let (target, label) = match (ext, chain_text) {
        (Some(e), _) => {
            let ext = GodelExtension::parse(e).map_err(input)?;
            let label = ext.to_string();
            (ClassifyTarget::Extension(ext), label)
        }
        (None, Some(c)) => {
            let g = chain(c)?;
            let label = g.to_string();
            (ClassifyTarget::ChainQuasivariety(g), label)
        }
        (None, None) => return Err(input("either --ext or --chain is required")),
    };
    let c = classify_extension(&target);
    Ok((
        json!({
            "target": label,
            "sc": c.sc,
            "hsc": c.hsc,
            "asc": c.asc,
            "psc": c.psc,
            "witness": c.witness.as_ref().map(render::separating_witness),
        }),
        Exit::Definitive,
    ))
}

pub fn check_table(path: &Path, flavor: Flavor) -> Result<(Value, Exit), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(input)?;
    let table = InterpretationTable::from_json(&value).map_err(input)?;
    let violations = check_bookkeeping(&table, flavor);
    Ok((
        json!({
            "ok": violations.is_empty(),
            "violations": violations
                .iter()
                .map(|v| json!({ "equation": v.equation.to_string(), "expected": v.expected, "found": v.found }))
                .collect::<Vec<_>>(),
        }),
        Exit::Definitive,
    ))
}

pub fn gadget(primes: &str) -> Result<(Value, Exit), CliError> {
    let x: BTreeSet<u64> = primes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| input(format!("bad prime {s:?}"))))
        .collect::<Result<_, _>>()?;
    let alg = GadgetAlgebra::new(&x).map_err(input)?;
    let inv = alg.inv_x();
    let gamma = eval_in_ax(&gamma_formula(&x, 0), &x, &BTreeMap::from([(0, inv.clone())])).map_err(input)?;
    let holds = delta_holds(&alg, &inv).map_err(input)?;
    let strings = |v: &[ratlogic::chains::SqrtRational]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok((
        json!({
            "primes": x.iter().collect::<Vec<_>>(),
            "inv": strings(&inv),
            "gamma_at_inv": strings(&gamma),
            "delta_at_inv": if holds { "1" } else { "0" },
        }),
        Exit::Definitive,
    ))
}
