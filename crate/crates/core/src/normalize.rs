//! Disjunctive normal form for standpoint expressions and index normal form
//! for formulas.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, StandpointExpr, UNIVERSAL};

/// An intersection of standpoint literals. `positives` is never empty: `*`
/// stands in when there is no positive atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunct {
    pub positives: BTreeSet<String>,
    pub negatives: BTreeSet<String>,
}

impl Conjunct {
    /// The conjunct `*`.
    pub fn universal() -> Self {
        Conjunct {
            positives: BTreeSet::from([UNIVERSAL.to_string()]),
            negatives: BTreeSet::new(),
        }
    }

    /// Builds a conjunct, or `None` if it denotes the empty set.
    pub fn new<P, N>(positives: P, negatives: N) -> Option<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        N: IntoIterator,
        N::Item: Into<String>,
    {
        let mut positives: BTreeSet<String> = positives.into_iter().map(Into::into).collect();
        let negatives: BTreeSet<String> = negatives.into_iter().map(Into::into).collect();
        if negatives.contains(UNIVERSAL) || !positives.is_disjoint(&negatives) {
            return None;
        }
        if positives.len() > 1 {
            positives.remove(UNIVERSAL);
        }
        if positives.is_empty() {
            positives.insert(UNIVERSAL.to_string());
        }
        Some(Conjunct {
            positives,
            negatives,
        })
    }

    /// Positive standpoint atoms, excluding `*`.
    pub fn positive_atoms(&self) -> impl Iterator<Item = &String> {
        self.positives.iter().filter(|s| s.as_str() != UNIVERSAL)
    }

    /// True when the conjunct has no negated literal.
    pub fn is_positive(&self) -> bool {
        self.negatives.is_empty()
    }

    fn meet(&self, other: &Conjunct) -> Option<Conjunct> {
        Conjunct::new(
            self.positives.iter().chain(&other.positives).cloned(),
            self.negatives.iter().chain(&other.negatives).cloned(),
        )
    }

    pub fn to_expr(&self) -> StandpointExpr {
        let literals = self.positives.iter().map(|s| atom_or_universal(s)).chain(
            self.negatives
                .iter()
                .map(|s| StandpointExpr::complement(StandpointExpr::atom(s.as_str()))),
        );
        literals
            .reduce(StandpointExpr::intersection)
            .expect("conjunct has a positive literal")
    }
}

fn atom_or_universal(s: &str) -> StandpointExpr {
    if s == UNIVERSAL {
        StandpointExpr::Universal
    } else {
        StandpointExpr::atom(s)
    }
}

/// A union of conjuncts, sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnfExpr {
    pub conjuncts: Vec<Conjunct>,
}

impl DnfExpr {
    fn from_set(set: BTreeSet<Conjunct>) -> Result<Self, EmptyExpression> {
        if set.is_empty() {
            return Err(EmptyExpression);
        }
        Ok(DnfExpr {
            conjuncts: set.into_iter().collect(),
        })
    }

    /// Embeds the normal form back into the expression syntax: left-nested
    /// unions of left-nested intersections.
    pub fn to_expr(&self) -> StandpointExpr {
        self.conjuncts
            .iter()
            .map(Conjunct::to_expr)
            .reduce(StandpointExpr::union)
            .expect("DNF is nonempty")
    }
}

impl fmt::Display for DnfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Every conjunct was contradictory: the expression denotes the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("standpoint expression denotes the empty set")]
pub struct EmptyExpression;

/// The expression `* & -*`, kept in place of an index that denotes nothing.
pub fn empty_marker() -> StandpointExpr {
    StandpointExpr::intersection(
        StandpointExpr::Universal,
        StandpointExpr::complement(StandpointExpr::Universal),
    )
}

pub fn is_empty_marker(e: &StandpointExpr) -> bool {
    *e == empty_marker()
}

pub fn to_dnf(e: &StandpointExpr) -> Result<DnfExpr, EmptyExpression> {
    DnfExpr::from_set(dnf(e, false))
}

// Conjunct set of `e`, or of its complement when `negated`.
fn dnf(e: &StandpointExpr, negated: bool) -> BTreeSet<Conjunct> {
    use StandpointExpr as E;
    match (e, negated) {
        (E::Universal, false) => BTreeSet::from([Conjunct::universal()]),
        (E::Universal, true) => BTreeSet::new(),
        (E::Atom(s), false) => Conjunct::new([s.as_str()], [] as [&str; 0])
            .into_iter()
            .collect(),
        (E::Atom(s), true) => Conjunct::new([] as [&str; 0], [s.as_str()])
            .into_iter()
            .collect(),
        (E::Complement(inner), _) => dnf(inner, !negated),
        (E::Intersection(a, b), false) | (E::Union(a, b), true) => {
            product(&dnf(a, negated), &dnf(b, negated))
        }
        (E::Intersection(a, b), true) | (E::Union(a, b), false) => {
            let mut out = dnf(a, negated);
            out.extend(dnf(b, negated));
            out
        }
        // e \ d = e & -d, and its complement is -e u d.
        (E::Difference(a, b), false) => product(&dnf(a, false), &dnf(b, true)),
        (E::Difference(a, b), true) => {
            let mut out = dnf(a, true);
            out.extend(dnf(b, false));
            out
        }
    }
}

fn product(xs: &BTreeSet<Conjunct>, ys: &BTreeSet<Conjunct>) -> BTreeSet<Conjunct> {
    xs.iter()
        .flat_map(|x| ys.iter().filter_map(move |y| x.meet(y)))
        .collect()
}

/// The DNF of `e` as an expression, or the empty marker.
pub fn dnf_expr(e: &StandpointExpr) -> StandpointExpr {
    match to_dnf(e) {
        Ok(d) => d.to_expr(),
        Err(EmptyExpression) => empty_marker(),
    }
}

/// Puts every standpoint index into DNF and replaces `!true` by `false`.
pub fn to_inf(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
        Formula::Not(g) if **g == Formula::Top => Formula::Bottom,
        Formula::Not(g) => Formula::not(to_inf(g)),
        Formula::And(a, b) => Formula::and(to_inf(a), to_inf(b)),
        Formula::Or(a, b) => Formula::or(to_inf(a), to_inf(b)),
        Formula::Implies(a, b) => Formula::implies(to_inf(a), to_inf(b)),
        Formula::Iff(a, b) => Formula::iff(to_inf(a), to_inf(b)),
        Formula::DefImplies(a, b) => Formula::def_implies(to_inf(a), to_inf(b)),
        Formula::Box(e, g) => Formula::boxed(dnf_expr(e), to_inf(g)),
        Formula::Diamond(e, g) => Formula::diamond(dnf_expr(e), to_inf(g)),
        Formula::DefBox(e, g) => Formula::def_box(dnf_expr(e), to_inf(g)),
        Formula::DefDiamond(e, g) => Formula::def_diamond(dnf_expr(e), to_inf(g)),
        Formula::Sharpening(e, d) => Formula::Sharpening(dnf_expr(e), dnf_expr(d)),
        Formula::DefSharpening(e, d) => Formula::DefSharpening(dnf_expr(e), dnf_expr(d)),
    }
}

/// True when every index of `f` is the embedding of a DNF (or the empty
/// marker).
pub fn is_inf(f: &Formula) -> bool {
    let index_ok = |e: &StandpointExpr| is_empty_marker(e) || dnf_expr(e) == *e;
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) => true,
        Formula::Not(g) => is_inf(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b)
        | Formula::DefImplies(a, b) => is_inf(a) && is_inf(b),
        Formula::Box(e, g)
        | Formula::Diamond(e, g)
        | Formula::DefBox(e, g)
        | Formula::DefDiamond(e, g) => index_ok(e) && is_inf(g),
        Formula::Sharpening(e, d) | Formula::DefSharpening(e, d) => index_ok(e) && index_ok(d),
    }
}
