//! State-preferential standpoint structures: the data model, the satisfaction
//! relation and a bounded brute-force model finder.

mod enumerate;
mod eval;
mod worlds;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{
    count_by_size, enumerate_spss, enumerate_spss_with, oracle_local_sat, oracle_local_sat_with,
    EnumOptions, OracleResult, SpssEnumerator, MAX_ENUM_WORLDS,
};
pub use eval::{EvalError, Structure};
pub use worlds::WorldSet;

use crate::syntax::{Formula, StandpointExpr, Vocabulary};

/// A set of precisifications, by index into [`Spss::precisifications`].
pub type Extension = BTreeSet<usize>;

/// A finite state-preferential standpoint structure.
///
/// Precisifications are referred to by their index; `prec` holds pairs
/// `(a, b)` meaning `a ≺ b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Spss {
    pub precisifications: Vec<String>,
    pub sigma: BTreeMap<String, BTreeSet<usize>>,
    pub gamma: Vec<BTreeSet<String>>,
    pub prec: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPrecisifications,
    DuplicatePrecisification(String),
    UnknownPrecisification { name: String, context: String },
    EmptyStandpoint(String),
    ReflexivePair(String),
    MissingTransitivePair(String, String),
    Cycle(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPrecisifications => write!(f, "no precisifications"),
            Violation::DuplicatePrecisification(p) => write!(f, "duplicate precisification {p}"),
            Violation::UnknownPrecisification { name, context } => {
                write!(f, "unknown precisification {name} in {context}")
            }
            Violation::EmptyStandpoint(s) => write!(f, "empty standpoint {s}"),
            Violation::ReflexivePair(p) => write!(f, "reflexive pair ({p}, {p})"),
            Violation::MissingTransitivePair(a, b) => {
                write!(f, "missing transitive pair ({a}, {b})")
            }
            Violation::Cycle(p) => write!(f, "preference cycle through {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed model JSON: {0}")]
    Json(String),
    #[error("invalid model: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// The JSON exchange form of an SPSS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpssJson {
    pub precisifications: Vec<String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub gamma: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub prec: Vec<(String, String)>,
}

impl Spss {
    /// Structure with precisifications named `pi1..pin` and no other content.
    pub fn with_worlds(n: usize) -> Self {
        Spss {
            precisifications: (1..=n).map(|i| format!("pi{i}")).collect(),
            sigma: BTreeMap::new(),
            gamma: vec![BTreeSet::new(); n],
            prec: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.precisifications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precisifications.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.precisifications.iter().position(|p| p == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.precisifications[i]
    }

    /// Standpoints are the keys of `sigma`; atoms are those true somewhere.
    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            prop_atoms: self.gamma.iter().flatten().cloned().collect(),
            standpoints: self.sigma.keys().cloned().collect(),
        }
    }

    /// Replaces `prec` by its transitive closure.
    pub fn close_prec(&mut self) {
        self.prec = transitive_closure(&self.prec);
    }

    /// Evaluation form. `prec` is closed on the way, so this is meaningful
    /// even for structures that still fail transitivity.
    pub fn structure(&self) -> Structure<FixedBitSet> {
        let n = self.len();
        let set = |members: &mut dyn Iterator<Item = usize>| {
            let mut s = FixedBitSet::with_capacity(n);
            for i in members {
                if i < n {
                    s.insert(i);
                }
            }
            s
        };
        let sigma = self
            .sigma
            .iter()
            .map(|(s, ws)| (s.clone(), set(&mut ws.iter().copied())))
            .collect();
        let mut valuation: BTreeMap<String, FixedBitSet> = BTreeMap::new();
        for (i, atoms) in self.gamma.iter().enumerate().take(n) {
            for p in atoms {
                valuation
                    .entry(p.clone())
                    .or_insert_with(|| FixedBitSet::with_capacity(n))
                    .insert(i);
            }
        }
        let closed = transitive_closure(&self.prec);
        let below = (0..n)
            .map(|b| set(&mut closed.iter().filter(|(_, y)| *y == b).map(|(a, _)| *a)))
            .collect();
        Structure {
            worlds: n,
            sigma,
            valuation,
            below,
        }
    }

    pub fn to_json(&self) -> SpssJson {
        let names = |ws: &BTreeSet<usize>| ws.iter().map(|&i| self.name(i).to_string()).collect();
        SpssJson {
            precisifications: self.precisifications.clone(),
            sigma: self
                .sigma
                .iter()
                .map(|(s, ws)| (s.clone(), names(ws)))
                .collect(),
            gamma: self
                .precisifications
                .iter()
                .zip(&self.gamma)
                .map(|(p, atoms)| (p.clone(), atoms.iter().cloned().collect()))
                .collect(),
            prec: self
                .prec
                .iter()
                .map(|&(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("model serializes")
    }

    /// Converts the exchange form, reporting every structural problem and
    /// every violated SPSS condition.
    pub fn from_json(json: &SpssJson) -> Result<Spss, ModelError> {
        let mut violations = Vec::new();
        let mut index = BTreeMap::new();
        for (i, p) in json.precisifications.iter().enumerate() {
            if index.insert(p.as_str(), i).is_some() {
                violations.push(Violation::DuplicatePrecisification(p.clone()));
            }
        }
        let mut lookup = |name: &str, context: String| match index.get(name) {
            Some(&i) => Some(i),
            None => {
                violations.push(Violation::UnknownPrecisification {
                    name: name.to_string(),
                    context,
                });
                None
            }
        };
        let mut m = Spss {
            precisifications: json.precisifications.clone(),
            sigma: BTreeMap::new(),
            gamma: vec![BTreeSet::new(); json.precisifications.len()],
            prec: BTreeSet::new(),
        };
        for (s, names) in &json.sigma {
            let ws = names
                .iter()
                .filter_map(|p| lookup(p, format!("sigma({s})")))
                .collect();
            m.sigma.insert(s.clone(), ws);
        }
        for (p, atoms) in &json.gamma {
            if let Some(i) = lookup(p, "gamma".to_string()) {
                m.gamma[i].extend(atoms.iter().cloned());
            }
        }
        for (a, b) in &json.prec {
            let a = lookup(a, "prec".to_string());
            let b = lookup(b, "prec".to_string());
            if let (Some(a), Some(b)) = (a, b) {
                m.prec.insert((a, b));
            }
        }
        if let Err(more) = validate_spss(&m) {
            violations.extend(more);
        }
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub fn from_json_str(text: &str) -> Result<Spss, ModelError> {
        let json: SpssJson =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Spss::from_json(&json)
    }
}

pub fn transitive_closure(pairs: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut closed = pairs.clone();
    loop {
        let extra: Vec<(usize, usize)> = closed
            .iter()
            .flat_map(|&(a, b)| closed.range((b, 0)..(b + 1, 0)).map(move |&(_, c)| (a, c)))
            .filter(|pair| !closed.contains(pair))
            .collect();
        if extra.is_empty() {
            return closed;
        }
        closed.extend(extra);
    }
}

/// Checks the SPSS conditions: nonempty Π, nonempty standpoints, indices in
/// range, and `prec` a transitive, irreflexive relation.
pub fn validate_spss(m: &Spss) -> Result<(), Vec<Violation>> {
    let n = m.len();
    let name = |i: usize| {
        m.precisifications
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("#{i}"))
    };
    let mut out = Vec::new();
    if n == 0 {
        out.push(Violation::NoPrecisifications);
    }
    if m.gamma.len() > n {
        out.push(Violation::UnknownPrecisification {
            name: name(n),
            context: "gamma".into(),
        });
    }
    for (s, ws) in &m.sigma {
        for &i in ws.iter().filter(|&&i| i >= n) {
            out.push(Violation::UnknownPrecisification {
                name: name(i),
                context: format!("sigma({s})"),
            });
        }
        if ws.is_empty() {
            out.push(Violation::EmptyStandpoint(s.clone()));
        }
    }
    for &(a, b) in &m.prec {
        for i in [a, b].into_iter().filter(|&i| i >= n) {
            out.push(Violation::UnknownPrecisification {
                name: name(i),
                context: "prec".into(),
            });
        }
    }
    for &(a, b) in &m.prec {
        if a == b {
            out.push(Violation::ReflexivePair(name(a)));
        }
    }
    let mut missing = BTreeSet::new();
    for &(a, b) in &m.prec {
        for &(_, c) in m.prec.range((b, 0)..(b + 1, 0)) {
            if !m.prec.contains(&(a, c)) {
                missing.insert((a, c));
            }
        }
    }
    for (a, c) in missing {
        out.push(Violation::MissingTransitivePair(name(a), name(c)));
    }
    let closed = transitive_closure(&m.prec);
    for i in 0..n {
        if closed.contains(&(i, i)) && !m.prec.contains(&(i, i)) {
            out.push(Violation::Cycle(name(i)));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn to_extension(s: &FixedBitSet) -> Extension {
    s.ones().collect()
}

fn to_bitset(x: &Extension, n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for &i in x.iter().filter(|&&i| i < n) {
        s.insert(i);
    }
    s
}

pub fn sigma_eval(m: &Spss, e: &StandpointExpr) -> Result<Extension, EvalError> {
    Ok(to_extension(&m.structure().sigma_of(e)?))
}

pub fn min_prec(m: &Spss, x: &Extension) -> Extension {
    let st = m.structure();
    to_extension(&st.minimal(&to_bitset(x, m.len())))
}

pub fn satisfies(m: &Spss, world: usize, f: &Formula) -> Result<bool, EvalError> {
    m.structure().satisfies(world, f)
}

pub fn satisfies_globally(m: &Spss, f: &Formula) -> Result<bool, EvalError> {
    m.structure().satisfies_globally(f)
}

pub fn extension(m: &Spss, f: &Formula) -> Result<Extension, EvalError> {
    Ok(to_extension(&m.structure().extension(f)?))
}
