//! JSON rendering of verdicts and witnesses. Rationals are strings so that
//! consumers never lose precision; object keys are sorted.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde_json::{json, Map, Value};

use ratlogic::godel_engine::{DiagramCertificate, GodelCountermodel, SeparatingWitness};
use ratlogic::luk_engine::LukCertificate;
use ratlogic::product_engine::{AdmissibilityCertificate, ChainRefutation, Derivation};
use ratlogic::verdict::Exhausted;

pub fn assignment<V: Display>(a: &BTreeMap<u32, V>) -> Value {
    Value::Object(a.iter().map(|(v, x)| (format!("x{v}"), Value::String(x.to_string()))).collect::<Map<_, _>>())
}

pub fn exhausted(e: &Exhausted) -> Value {
    json!({ "tuples": e.tuples, "depth": e.depth, "steps": e.steps })
}

pub fn luk_certificate(c: &LukCertificate) -> Value {
    json!({ "guards": c.guards, "leaves": c.leaves })
}

pub fn diagram_certificate(c: &DiagramCertificate) -> Value {
    json!({
        "chains": c.chains.iter().map(|ch| ch.to_string()).collect::<Vec<_>>(),
        "diagrams": c.diagrams,
    })
}

pub fn godel_countermodel(c: &GodelCountermodel) -> Value {
    json!({ "chain": c.chain.to_string(), "assignment": assignment(&c.assignment) })
}

pub fn derivation(d: &Derivation) -> Value {
    d.to_json()
}

pub fn admissibility_certificate(c: &AdmissibilityCertificate) -> Value {
    match c {
        AdmissibilityCertificate::Derivation(d) => derivation(d),
        AdmissibilityCertificate::VacuousPremise { premise, value } => {
            json!([{ "by": "vacuous_premise", "premise": premise, "value": value.to_string() }])
        }
    }
}

pub fn chain_refutation(r: &ChainRefutation) -> Value {
    json!({ "chain": r.chain.to_string(), "assignment": assignment(&r.assignment) })
}

pub fn separating_witness(w: &SeparatingWitness) -> Value {
    json!({
        "rule": w.rule.to_string(),
        "admissible": diagram_certificate(&w.admissible),
        "refutation": godel_countermodel(&w.refutation),
    })
}
