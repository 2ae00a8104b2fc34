//! Finite operation tables and the bookkeeping equations
//! `c_0 ≈ 0`, `c_1 ≈ 1`, `c_p · c_q ≈ c_{p·q}`, `c_p → c_q ≈ c_{p→q}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use super::BlAlgebra;
use crate::numerics::{parse_rational, Rational};

/// Which standard chain computes the target constants `p·q` and `p→q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Luk,
    Prod,
    Godel,
}

impl Flavor {
    pub fn fuse(self, p: &Rational, q: &Rational) -> Rational {
        match self {
            Flavor::Luk => (p + q - Rational::one()).max(Rational::zero()),
            Flavor::Prod => p * q,
            Flavor::Godel => p.min(q).clone(),
        }
    }

    pub fn imp(self, p: &Rational, q: &Rational) -> Rational {
        if p <= q {
            return Rational::one();
        }
        match self {
            Flavor::Luk => Rational::one() - p + q,
            Flavor::Prod => q / p,
            Flavor::Godel => q.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BookkeepingEquation {
    Zero,
    One,
    Fuse(Rational, Rational),
    Imp(Rational, Rational),
}

impl fmt::Display for BookkeepingEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BookkeepingEquation::Zero => f.write_str("c_0 = 0"),
            BookkeepingEquation::One => f.write_str("c_1 = 1"),
            BookkeepingEquation::Fuse(p, q) => write!(f, "c_{p} * c_{q} = c_({p}*{q})"),
            BookkeepingEquation::Imp(p, q) => write!(f, "c_{p} -> c_{q} = c_({p}->{q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub equation: BookkeepingEquation,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, found {}", self.equation, self.expected, self.found)
    }
}

/// Finite carrier with total `·` and `→` tables and a partial constant map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretationTable {
    pub carrier: Vec<String>,
    pub fuse: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    pub constants: BTreeMap<Rational, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("missing or malformed field {0:?}")]
    Field(&'static str),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("table {0:?} is not {1}x{1}")]
    Shape(&'static str, usize),
    #[error("bad constant key {0:?}")]
    ConstantKey(String),
    #[error("the subset is not closed under the operations")]
    NotClosed,
}

impl InterpretationTable {
    /// Restricts an algebra to the listed elements, which must be closed
    /// under `·` and `→` and contain 0 and 1.
    pub fn from_algebra<A: BlAlgebra>(
        alg: &A,
        elements: &[A::Value],
        name: impl Fn(&A::Value) -> String,
        constants: &[Rational],
    ) -> Result<Self, TableError> {
        let index = |v: &A::Value| elements.iter().position(|e| e == v).ok_or(TableError::NotClosed);
        let table = |op: &dyn Fn(&A::Value, &A::Value) -> A::Value| {
            elements
                .iter()
                .map(|a| elements.iter().map(|b| index(&op(a, b))).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
        };
        let fuse = table(&|a, b| alg.fuse(a, b))?;
        let imp = table(&|a, b| alg.imp(a, b))?;
        let mut cmap = BTreeMap::new();
        for q in constants {
            let v = alg.constant(q).ok_or(TableError::NotClosed)?;
            cmap.insert(q.clone(), index(&v)?);
        }
        Ok(Self {
            carrier: elements.iter().map(name).collect(),
            fuse,
            imp,
            zero: index(&alg.zero())?,
            one: index(&alg.one())?,
            constants: cmap,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, TableError> {
        let carrier: Vec<String> = v
            .get("carrier")
            .and_then(Value::as_array)
            .ok_or(TableError::Field("carrier"))?
            .iter()
            .map(|e| e.as_str().map(str::to_string).ok_or(TableError::Field("carrier")))
            .collect::<Result<_, _>>()?;
        let mut names = BTreeMap::new();
        for (i, n) in carrier.iter().enumerate() {
            if names.insert(n.clone(), i).is_some() {
                return Err(TableError::DuplicateElement(n.clone()));
            }
        }
        let lookup = |e: &Value, field: &'static str| -> Result<usize, TableError> {
            let s = e.as_str().ok_or(TableError::Field(field))?;
            names.get(s).copied().ok_or_else(|| TableError::UnknownElement(s.to_string()))
        };
        let n = carrier.len();
        let table = |field: &'static str| -> Result<Vec<Vec<usize>>, TableError> {
            let rows = v.get(field).and_then(Value::as_array).ok_or(TableError::Field(field))?;
            if rows.len() != n {
                return Err(TableError::Shape(field, n));
            }
            rows.iter()
                .map(|row| {
                    let row = row.as_array().ok_or(TableError::Field(field))?;
                    if row.len() != n {
                        return Err(TableError::Shape(field, n));
                    }
                    row.iter().map(|e| lookup(e, field)).collect()
                })
                .collect()
        };
        let fuse = table("fuse")?;
        let imp = table("imp")?;
        let zero = lookup(v.get("zero").ok_or(TableError::Field("zero"))?, "zero")?;
        let one = lookup(v.get("one").ok_or(TableError::Field("one"))?, "one")?;
        let mut constants = BTreeMap::new();
        if let Some(c) = v.get("constants") {
            let c = c.as_object().ok_or(TableError::Field("constants"))?;
            for (k, e) in c {
                let q = parse_rational(k).map_err(|_| TableError::ConstantKey(k.clone()))?;
                constants.insert(q, lookup(e, "constants")?);
            }
        }
        Ok(Self { carrier, fuse, imp, zero, one, constants })
    }

    pub fn to_json(&self) -> Value {
        let name = |i: &usize| Value::String(self.carrier[*i].clone());
        let table = |t: &Vec<Vec<usize>>| -> Value {
            t.iter().map(|row| row.iter().map(name).collect::<Vec<_>>().into()).collect::<Vec<Value>>().into()
        };
        let constants: Map<String, Value> = self.constants.iter().map(|(q, i)| (q.to_string(), name(i))).collect();
        json!({
            "carrier": self.carrier,
            "fuse": table(&self.fuse),
            "imp": table(&self.imp),
            "zero": self.carrier[self.zero],
            "one": self.carrier[self.one],
            "constants": constants,
        })
    }
}

/// Bookkeeping violations of a finite table. Equations whose target
/// constant is not in the table's constant map are skipped; 0 and 1 are
/// always known.
pub fn check_bookkeeping(t: &InterpretationTable, flavor: Flavor) -> Vec<Violation> {
    let name = |i: usize| t.carrier[i].clone();
    let mut out = Vec::new();
    let mut check = |eq: BookkeepingEquation, expected: usize, found: usize| {
        if expected != found {
            out.push(Violation { equation: eq, expected: name(expected), found: name(found) });
        }
    };
    if let Some(&c0) = t.constants.get(&Rational::zero()) {
        check(BookkeepingEquation::Zero, t.zero, c0);
    }
    if let Some(&c1) = t.constants.get(&Rational::one()) {
        check(BookkeepingEquation::One, t.one, c1);
    }
    // `c_0` and `c_1` denote the bounds even when the map omits them.
    let mut constants = t.constants.clone();
    constants.entry(Rational::zero()).or_insert(t.zero);
    constants.entry(Rational::one()).or_insert(t.one);
    for (p, &cp) in &constants {
        for (q, &cq) in &constants {
            if let Some(&target) = constants.get(&flavor.fuse(p, q)) {
                check(BookkeepingEquation::Fuse(p.clone(), q.clone()), target, t.fuse[cp][cq]);
            }
            if let Some(&target) = constants.get(&flavor.imp(p, q)) {
                check(BookkeepingEquation::Imp(p.clone(), q.clone()), target, t.imp[cp][cq]);
            }
        }
    }
    out
}

/// Bookkeeping violations of an algebra over the given constants; works
/// for infinite chains where no finite table exists.
pub fn check_bookkeeping_algebra<A: BlAlgebra>(alg: &A, constants: &[Rational], flavor: Flavor) -> Vec<Violation>
where
    A::Value: fmt::Debug,
{
    let mut out = Vec::new();
    let c = |q: &Rational| alg.constant(q);
    let show = |v: &Option<A::Value>| match v {
        Some(v) => format!("{v:?}"),
        None => "undefined".to_string(),
    };
    let mut check = |eq: BookkeepingEquation, expected: Option<A::Value>, found: Option<A::Value>| {
        if expected != found {
            out.push(Violation { equation: eq, expected: show(&expected), found: show(&found) });
        }
    };
    check(BookkeepingEquation::Zero, Some(alg.zero()), c(&Rational::zero()));
    check(BookkeepingEquation::One, Some(alg.one()), c(&Rational::one()));
    for p in constants {
        for q in constants {
            let (cp, cq) = (c(p), c(q));
            let both = cp.as_ref().zip(cq.as_ref());
            check(
                BookkeepingEquation::Fuse(p.clone(), q.clone()),
                c(&flavor.fuse(p, q)),
                both.map(|(a, b)| alg.fuse(a, b)),
            );
            check(
                BookkeepingEquation::Imp(p.clone(), q.clone()),
                c(&flavor.imp(p, q)),
                both.map(|(a, b)| alg.imp(a, b)),
            );
        }
    }
    out
}
