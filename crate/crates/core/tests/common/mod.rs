#![allow(dead_code)]

use std::collections::BTreeSet;

use pdsl::normalize::to_inf;
use pdsl::semantics::{transitive_closure, Spss};
use pdsl::syntax::{expand_derived, parse_formula, Formula, StandpointExpr, VocabMode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn parse(text: &str) -> Formula {
    parse_formula(text, VocabMode::Inferred)
        .unwrap_or_else(|e| panic!("{text}: {e}"))
        .0
}

pub fn inf(f: &Formula) -> Formula {
    to_inf(&expand_derived(f))
}

/// Seeded generator of formulas, standpoint expressions and structures.
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub atoms: Vec<String>,
    pub standpoints: Vec<String>,
    /// Allow `~>` in generated formulas.
    pub conditionals: bool,
    /// Allow indexes other than names and `*`.
    pub complex_indexes: bool,
}

impl Gen {
    pub fn new(seed: u64, atoms: &[&str], standpoints: &[&str]) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            standpoints: standpoints.iter().map(|s| s.to_string()).collect(),
            conditionals: true,
            complex_indexes: true,
        }
    }

    fn name(&mut self) -> StandpointExpr {
        if self.standpoints.is_empty() || self.rng.gen_ratio(1, 5) {
            return StandpointExpr::Universal;
        }
        StandpointExpr::atom(self.standpoints.choose(&mut self.rng).unwrap().clone())
    }

    /// A standpoint expression of at most `budget` symbols.
    pub fn expr(&mut self, budget: usize) -> StandpointExpr {
        if budget < 2 || !self.complex_indexes || self.rng.gen_ratio(1, 2) {
            return self.name();
        }
        if budget == 2 || self.rng.gen_ratio(1, 4) {
            return StandpointExpr::complement(self.expr(budget - 1));
        }
        let left = self.rng.gen_range(1..budget - 1);
        let (a, b) = (self.expr(left), self.expr(budget - 1 - left));
        match self.rng.gen_range(0..3) {
            0 => StandpointExpr::intersection(a, b),
            1 => StandpointExpr::union(a, b),
            _ => StandpointExpr::difference(a, b),
        }
    }

    fn leaf(&mut self) -> Formula {
        match self.rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(self.atoms.choose(&mut self.rng).unwrap().clone()),
        }
    }

    /// A formula of at most `budget` symbols over the full surface syntax.
    pub fn formula(&mut self, budget: usize) -> Formula {
        if budget <= 1 {
            return self.leaf();
        }
        if budget == 2 {
            return Formula::not(self.leaf());
        }
        let kind = self.rng.gen_range(0..14);
        match kind {
            0 | 1 => Formula::not(self.formula(budget - 1)),
            2..=5 | 12 if !(kind == 12 && !self.conditionals) => {
                let left = self.rng.gen_range(1..budget - 1);
                let (a, b) = (self.formula(left), self.formula(budget - 1 - left));
                match kind {
                    2 => Formula::and(a, b),
                    3 => Formula::or(a, b),
                    4 => Formula::implies(a, b),
                    5 => Formula::iff(a, b),
                    _ => Formula::def_implies(a, b),
                }
            }
            6..=9 => {
                let index = self.rng.gen_range(1..=(budget - 2).min(3));
                let e = self.expr(index);
                let body = self.formula(budget - 1 - index);
                match kind {
                    6 => Formula::boxed(e, body),
                    7 => Formula::diamond(e, body),
                    8 => Formula::def_box(e, body),
                    _ => Formula::def_diamond(e, body),
                }
            }
            _ => {
                let left = self.rng.gen_range(1..budget - 1).min(3);
                let right = (budget - 1 - left).clamp(1, 3);
                let (e, d) = (self.expr(left), self.expr(right));
                if kind == 10 {
                    Formula::Sharpening(e, d)
                } else {
                    Formula::DefSharpening(e, d)
                }
            }
        }
    }

    /// A random valid structure with `1..=max_worlds` precisifications.
    pub fn structure(&mut self, max_worlds: usize) -> Spss {
        let k = self.rng.gen_range(1..=max_worlds);
        let mut m = Spss::with_worlds(k);
        for s in self.standpoints.clone() {
            let mut members: BTreeSet<usize> = (0..k).filter(|_| self.rng.gen_bool(0.5)).collect();
            if members.is_empty() {
                members.insert(self.rng.gen_range(0..k));
            }
            m.sigma.insert(s, members);
        }
        for i in 0..k {
            for p in &self.atoms {
                if self.rng.gen_bool(0.5) {
                    m.gamma[i].insert(p.clone());
                }
            }
        }
        // Pairs respecting a random linear extension are acyclic.
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut self.rng);
        let mut pairs = BTreeSet::new();
        for a in 0..k {
            for b in a + 1..k {
                if self.rng.gen_ratio(1, 3) {
                    pairs.insert((order[a], order[b]));
                }
            }
        }
        m.prec = transitive_closure(&pairs);
        m
    }
}

/// One instance of a validity: wherever `premise` holds, so does `conclusion`.
#[derive(Debug, Clone)]
pub struct Law {
    pub name: &'static str,
    pub premise: Formula,
    pub conclusion: Formula,
}

impl Law {
    fn new(name: &'static str, premise: Formula, conclusion: Formula) -> Self {
        Law {
            name,
            premise,
            conclusion,
        }
    }

    fn valid(name: &'static str, conclusion: Formula) -> Self {
        Law::new(name, Formula::Top, conclusion)
    }
}

pub const LAW_NAMES: [&str; 14] = [
    "supra-classicality box",
    "supra-classicality dpos",
    "supra-classicality sharpening",
    "supra-classicality conditional",
    "union defeasible box",
    "union dpos",
    "klm consistency",
    "klm reflexivity",
    "klm lle",
    "klm rw",
    "klm and",
    "klm or",
    "klm cm",
    "adapted axiom p",
];

fn sharp(e: &StandpointExpr, d: &StandpointExpr) -> Formula {
    Formula::Sharpening(e.clone(), d.clone())
}

fn dsharp(e: &StandpointExpr, d: &StandpointExpr) -> Formula {
    Formula::DefSharpening(e.clone(), d.clone())
}

fn inter(e: &StandpointExpr, d: &StandpointExpr) -> StandpointExpr {
    StandpointExpr::intersection(e.clone(), d.clone())
}

fn union(e: &StandpointExpr, d: &StandpointExpr) -> StandpointExpr {
    StandpointExpr::union(e.clone(), d.clone())
}

/// Laws that take one index and one formula.
pub fn laws_e_a(e: &StandpointExpr, a: &Formula) -> Vec<Law> {
    vec![
        Law::new(
            LAW_NAMES[0],
            Formula::boxed(e.clone(), a.clone()),
            Formula::def_box(e.clone(), a.clone()),
        ),
        Law::new(
            LAW_NAMES[1],
            Formula::def_diamond(e.clone(), a.clone()),
            Formula::diamond(e.clone(), a.clone()),
        ),
    ]
}

pub fn laws_e(e: &StandpointExpr) -> Vec<Law> {
    vec![
        Law::valid(
            LAW_NAMES[6],
            Formula::not(dsharp(
                &StandpointExpr::Universal,
                &inter(e, &StandpointExpr::complement(e.clone())),
            )),
        ),
        Law::valid(LAW_NAMES[7], dsharp(e, e)),
    ]
}

pub fn laws_e_d(e: &StandpointExpr, d: &StandpointExpr) -> Vec<Law> {
    vec![Law::new(LAW_NAMES[2], sharp(e, d), dsharp(e, d))]
}

pub fn laws_a_b(a: &Formula, b: &Formula) -> Vec<Law> {
    vec![Law::new(
        LAW_NAMES[3],
        Formula::implies(a.clone(), b.clone()),
        Formula::def_implies(a.clone(), b.clone()),
    )]
}

pub fn laws_e_d_a(e: &StandpointExpr, d: &StandpointExpr, a: &Formula) -> Vec<Law> {
    vec![
        Law::new(
            LAW_NAMES[4],
            Formula::and(
                Formula::def_box(e.clone(), a.clone()),
                Formula::def_box(d.clone(), a.clone()),
            ),
            Formula::def_box(union(e, d), a.clone()),
        ),
        Law::new(
            LAW_NAMES[5],
            Formula::def_diamond(union(e, d), a.clone()),
            Formula::or(
                Formula::def_diamond(e.clone(), a.clone()),
                Formula::def_diamond(d.clone(), a.clone()),
            ),
        ),
        Law::valid(
            LAW_NAMES[13],
            Formula::implies(
                dsharp(e, d),
                Formula::implies(
                    Formula::boxed(d.clone(), a.clone()),
                    Formula::def_box(e.clone(), a.clone()),
                ),
            ),
        ),
    ]
}

pub fn laws_e_d_g(e: &StandpointExpr, d: &StandpointExpr, g: &StandpointExpr) -> Vec<Law> {
    vec![
        Law::new(
            LAW_NAMES[8],
            Formula::and(Formula::and(sharp(e, d), sharp(d, e)), dsharp(e, g)),
            dsharp(d, g),
        ),
        Law::new(
            LAW_NAMES[9],
            Formula::and(dsharp(e, d), sharp(d, g)),
            dsharp(e, g),
        ),
        Law::new(
            LAW_NAMES[10],
            Formula::and(dsharp(e, d), dsharp(e, g)),
            dsharp(e, &inter(d, g)),
        ),
        Law::new(
            LAW_NAMES[11],
            Formula::and(dsharp(e, d), dsharp(g, d)),
            dsharp(&union(e, g), d),
        ),
        Law::new(
            LAW_NAMES[12],
            Formula::and(dsharp(e, d), dsharp(e, g)),
            dsharp(&inter(e, g), d),
        ),
    ]
}

/// Every law over every combination of the given indexes and formulas.
pub fn all_laws(exprs: &[StandpointExpr], formulas: &[Formula]) -> Vec<Law> {
    let mut out = Vec::new();
    for e in exprs {
        out.extend(laws_e(e));
        for a in formulas {
            out.extend(laws_e_a(e, a));
        }
        for d in exprs {
            out.extend(laws_e_d(e, d));
            for a in formulas {
                out.extend(laws_e_d_a(e, d, a));
            }
            for g in exprs {
                out.extend(laws_e_d_g(e, d, g));
            }
        }
    }
    for a in formulas {
        for b in formulas {
            out.extend(laws_a_b(a, b));
        }
    }
    out
}

/// One instance of every law from a single draw of indexes and formulas.
pub fn random_laws(g: &mut Gen, index_budget: usize, formula_budget: usize) -> Vec<Law> {
    let (e, d, x) = (
        g.expr(index_budget),
        g.expr(index_budget),
        g.expr(index_budget),
    );
    let (a, b) = (g.formula(formula_budget), g.formula(formula_budget));
    let mut out = laws_e(&e);
    out.extend(laws_e_a(&e, &a));
    out.extend(laws_e_d(&e, &d));
    out.extend(laws_a_b(&a, &b));
    out.extend(laws_e_d_a(&e, &d, &a));
    out.extend(laws_e_d_g(&e, &d, &x));
    out
}

fn world_set(worlds: &[usize]) -> BTreeSet<usize> {
    worlds.iter().map(|w| w - 1).collect()
}

/// The vegetarian/pacifist structure, with the pacifist standpoint as drawn.
pub fn figure_one() -> Spss {
    let mut m = Spss::with_worlds(7);
    for (s, ws) in [
        ("Env", &[1, 2, 4][..]),
        ("Pcf", &[3, 5, 6, 7]),
        ("Vga", &[2, 4]),
        ("Vgt", &[2, 3, 4, 5]),
    ] {
        m.sigma.insert(s.to_string(), world_set(ws));
    }
    for (w, atoms) in [
        (1, &["egg"][..]),
        (2, &["animal", "cheese"]),
        (3, &["cheese"]),
        (4, &["animal", "egg"]),
        (5, &["egg"]),
        (6, &["cheese"]),
        (7, &["egg"]),
    ] {
        m.gamma[w - 1] = atoms.iter().map(|a| a.to_string()).collect();
    }
    let pairs = [(3, 2), (3, 4), (5, 2), (5, 4), (7, 6)]
        .iter()
        .map(|&(a, b)| (a - 1, b - 1))
        .collect();
    m.prec = transitive_closure(&pairs);
    m
}

/// Three precisifications separating the defeasible modalities from the classical ones.
pub fn converse_counterexample() -> Spss {
    let mut m = Spss::with_worlds(3);
    m.sigma.insert("s".into(), world_set(&[1, 2]));
    m.sigma.insert("t".into(), world_set(&[1, 3]));
    m.gamma[0].insert("p".into());
    m.gamma[1].insert("q".into());
    m.gamma[2].extend(["p".to_string(), "q".to_string()]);
    m.prec = [(0, 1), (0, 2)].into_iter().collect();
    m
}

/// Name of the first law violated somewhere in `m`, if any.
pub fn violated_law<W: pdsl::semantics::WorldSet>(
    m: &pdsl::semantics::Structure<W>,
    laws: &[Law],
) -> Option<String> {
    laws.iter()
        .find(|law| {
            let premise = m
                .extension(&law.premise)
                .expect("vocabulary covers the law");
            let conclusion = m
                .extension(&law.conclusion)
                .expect("vocabulary covers the law");
            !premise.is_subset(&conclusion)
        })
        .map(|law| {
            format!(
                "{}: {} does not yield {}",
                law.name,
                pdsl::syntax::print_formula(&law.premise),
                pdsl::syntax::print_formula(&law.conclusion)
            )
        })
}
