use std::collections::BTreeMap;

use super::eval::Structure;
use super::worlds::WorldSet;
use super::Spss;
use crate::syntax::{vocabulary_of, Formula, Vocabulary};

/// Largest structure the enumerator will build (bitmask representation).
pub const MAX_ENUM_WORLDS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub min_worlds: usize,
    pub max_worlds: usize,
    /// Keep only the lexicographically least member of every isomorphism class.
    pub reduce_symmetry: bool,
}

impl EnumOptions {
    pub fn up_to(max_worlds: usize) -> Self {
        EnumOptions {
            min_worlds: 1,
            max_worlds,
            reduce_symmetry: false,
        }
    }
}

/// Every SPSS over `vocab` with `1..=max_worlds` precisifications, ordered by
/// size, then valuation, then standpoint assignment, then preference order.
pub fn enumerate_spss(vocab: &Vocabulary, max_worlds: usize) -> SpssEnumerator {
    enumerate_spss_with(vocab, EnumOptions::up_to(max_worlds))
}

pub fn enumerate_spss_with(vocab: &Vocabulary, options: EnumOptions) -> SpssEnumerator {
    assert!(
        options.max_worlds <= MAX_ENUM_WORLDS,
        "enumeration is limited to {MAX_ENUM_WORLDS} precisifications"
    );
    SpssEnumerator::new(vocab, options)
}

/// All strict partial orders on `k` elements, each as `below` masks.
fn strict_orders(k: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut below = vec![0u64; k];
        for (j, &(a, b)) in pairs.iter().enumerate() {
            if bits >> j & 1 == 1 {
                below[b] |= 1 << a;
            }
        }
        let transitive = (0..k).all(|b| {
            (0..k)
                .filter(|&a| below[b] >> a & 1 == 1)
                .all(|a| below[a] & !below[b] == 0)
        });
        let irreflexive = (0..k).all(|i| below[i] >> i & 1 == 0);
        if transitive && irreflexive {
            out.push(below);
        }
    }
    out
}

/// Iterator over the structures of a bounded enumeration.
pub struct SpssEnumerator {
    atoms: Vec<String>,
    standpoints: Vec<String>,
    options: EnumOptions,
    worlds: usize,
    orders: Vec<Vec<u64>>,
    permutations: Vec<Vec<usize>>,
    // Mixed-radix counters: valuation masks, standpoint masks (each nonzero),
    // order index.
    gamma: Vec<u64>,
    sigma: Vec<u64>,
    order: usize,
    done: bool,
}

impl SpssEnumerator {
    fn new(vocab: &Vocabulary, options: EnumOptions) -> Self {
        let mut it = SpssEnumerator {
            atoms: vocab.prop_atoms.iter().cloned().collect(),
            standpoints: vocab.standpoints.iter().cloned().collect(),
            options,
            worlds: 0,
            orders: Vec::new(),
            permutations: Vec::new(),
            gamma: Vec::new(),
            sigma: Vec::new(),
            order: 0,
            done: false,
        };
        it.start_size(options.min_worlds.max(1));
        it
    }

    fn start_size(&mut self, k: usize) {
        if k > self.options.max_worlds {
            self.done = true;
            return;
        }
        self.worlds = k;
        self.orders = strict_orders(k);
        self.permutations = if self.options.reduce_symmetry {
            permutations(k)
        } else {
            Vec::new()
        };
        self.gamma = vec![0; self.atoms.len()];
        self.sigma = vec![1; self.standpoints.len()];
        self.order = 0;
    }

    fn advance(&mut self) {
        let full = u64::full(self.worlds);
        self.order += 1;
        if self.order < self.orders.len() {
            return;
        }
        self.order = 0;
        for s in self.sigma.iter_mut().rev() {
            if *s < full {
                *s += 1;
                return;
            }
            *s = 1;
        }
        for g in self.gamma.iter_mut().rev() {
            if *g < full {
                *g += 1;
                return;
            }
            *g = 0;
        }
        self.start_size(self.worlds + 1);
    }

    fn key(&self, perm: Option<&[usize]>) -> Vec<u64> {
        let map = |mask: u64| match perm {
            None => mask,
            Some(p) => (0..self.worlds)
                .filter(|&i| mask >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | 1 << p[i]),
        };
        let below = &self.orders[self.order];
        let mut permuted_below = vec![0u64; self.worlds];
        for (i, &b) in below.iter().enumerate() {
            let target = perm.map_or(i, |p| p[i]);
            permuted_below[target] = map(b);
        }
        self.gamma
            .iter()
            .map(|&g| map(g))
            .chain(self.sigma.iter().map(|&s| map(s)))
            .chain(permuted_below)
            .collect()
    }

    fn is_canonical(&self) -> bool {
        let own = self.key(None);
        self.permutations.iter().all(|p| own <= self.key(Some(p)))
    }

    fn current(&self) -> Structure<u64> {
        Structure {
            worlds: self.worlds,
            sigma: self
                .standpoints
                .iter()
                .cloned()
                .zip(self.sigma.iter().copied())
                .collect(),
            valuation: self
                .atoms
                .iter()
                .cloned()
                .zip(self.gamma.iter().copied())
                .collect(),
            below: self.orders[self.order].clone(),
        }
    }
}

impl Iterator for SpssEnumerator {
    type Item = Structure<u64>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let keep = !self.options.reduce_symmetry || self.is_canonical();
            let item = keep.then(|| self.current());
            self.advance();
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in 0..k {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), k, &mut out);
    out
}

impl Structure<u64> {
    /// Named form, precisifications `pi1..pik`.
    pub fn to_spss(&self) -> Spss {
        let mut m = Spss::with_worlds(self.worlds);
        for (s, &mask) in &self.sigma {
            m.sigma
                .insert(s.clone(), mask.members(self.worlds).into_iter().collect());
        }
        for (p, &mask) in &self.valuation {
            for i in mask.members(self.worlds) {
                m.gamma[i].insert(p.clone());
            }
        }
        for (b, &mask) in self.below.iter().enumerate() {
            for a in mask.members(self.worlds) {
                m.prec.insert((a, b));
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Found { model: Spss, world: usize },
    NotFound,
}

impl OracleResult {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleResult::Found { .. })
    }
}

/// First structure (in enumeration order) with a precisification satisfying
/// `f`. The vocabulary is extended by the names occurring in `f`. A miss is
/// only evidence of unsatisfiability, never proof.
pub fn oracle_local_sat(f: &Formula, vocab: &Vocabulary, max_worlds: usize) -> OracleResult {
    oracle_local_sat_with(f, vocab, EnumOptions::up_to(max_worlds))
}

pub fn oracle_local_sat_with(
    f: &Formula,
    vocab: &Vocabulary,
    options: EnumOptions,
) -> OracleResult {
    let mut full = vocab.clone();
    let used = vocabulary_of(f);
    full.prop_atoms.extend(used.prop_atoms);
    full.standpoints.extend(used.standpoints);
    for m in enumerate_spss_with(&full, options) {
        let ext = m.extension(f).expect("vocabulary covers the formula");
        if ext != 0 {
            return OracleResult::Found {
                world: ext.trailing_zeros() as usize,
                model: m.to_spss(),
            };
        }
    }
    OracleResult::NotFound
}

/// Groups the structures of an enumeration by size; handy for reports.
pub fn count_by_size(vocab: &Vocabulary, options: EnumOptions) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for m in enumerate_spss_with(vocab, options) {
        *out.entry(m.worlds).or_insert(0) += 1;
    }
    out
}
