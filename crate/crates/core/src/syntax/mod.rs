//! Abstract and concrete syntax of defeasible standpoint formulas.
//!
//! Standpoint expressions and formulas are plain tree values. The concrete
//! syntax is handled by [`parse_formula`] and [`print_formula`]; derived
//! connectives are rewritten into the primitive core by [`expand_derived`].

mod expand;
mod lexer;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use expand::expand_derived;
pub use parser::{parse_formula, parse_standpoint_expr, VocabMode};
pub use printer::{print_formula, print_standpoint_expr};

/// Name of the implicit universal standpoint.
pub const UNIVERSAL: &str = "*";

/// Suffix marking the standpoints introduced by the classical translation.
pub const TILDE_SUFFIX: char = '~';

/// Standpoint expressions over a set of standpoint names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StandpointExpr {
    Universal,
    Atom(String),
    Complement(Box<StandpointExpr>),
    Intersection(Box<StandpointExpr>, Box<StandpointExpr>),
    Union(Box<StandpointExpr>, Box<StandpointExpr>),
    Difference(Box<StandpointExpr>, Box<StandpointExpr>),
}

impl StandpointExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        StandpointExpr::Atom(name.into())
    }

    pub fn complement(e: StandpointExpr) -> Self {
        StandpointExpr::Complement(Box::new(e))
    }

    pub fn intersection(e: StandpointExpr, d: StandpointExpr) -> Self {
        StandpointExpr::Intersection(Box::new(e), Box::new(d))
    }

    pub fn union(e: StandpointExpr, d: StandpointExpr) -> Self {
        StandpointExpr::Union(Box::new(e), Box::new(d))
    }

    pub fn difference(e: StandpointExpr, d: StandpointExpr) -> Self {
        StandpointExpr::Difference(Box::new(e), Box::new(d))
    }

    /// Standpoint names occurring in the expression (never `*`).
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            StandpointExpr::Universal => {}
            StandpointExpr::Atom(s) => {
                out.insert(s.clone());
            }
            StandpointExpr::Complement(e) => e.collect_atoms(out),
            StandpointExpr::Intersection(a, b)
            | StandpointExpr::Union(a, b)
            | StandpointExpr::Difference(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of symbols, counting every operator and every atom once.
    pub fn size(&self) -> usize {
        match self {
            StandpointExpr::Universal | StandpointExpr::Atom(_) => 1,
            StandpointExpr::Complement(e) => 1 + e.size(),
            StandpointExpr::Intersection(a, b)
            | StandpointExpr::Union(a, b)
            | StandpointExpr::Difference(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when no `Union` or `Difference` constructor occurs.
    pub fn is_expanded(&self) -> bool {
        match self {
            StandpointExpr::Universal | StandpointExpr::Atom(_) => true,
            StandpointExpr::Complement(e) => e.is_expanded(),
            StandpointExpr::Intersection(a, b) => a.is_expanded() && b.is_expanded(),
            StandpointExpr::Union(..) | StandpointExpr::Difference(..) => false,
        }
    }
}

impl fmt::Display for StandpointExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_standpoint_expr(self))
    }
}

/// Formulas of the defeasible standpoint language, including the derived
/// connectives accepted by the concrete syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    /// Falsum. Derived (`!true`) in the surface language; the tableau keeps it
    /// as a distinguished node so that closure can be matched syntactically.
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(StandpointExpr, Box<Formula>),
    Diamond(StandpointExpr, Box<Formula>),
    /// Truth in every most typical precisification of the standpoint.
    DefBox(StandpointExpr, Box<Formula>),
    /// Truth in at least one most typical precisification of the standpoint.
    DefDiamond(StandpointExpr, Box<Formula>),
    /// Defeasible conditional: the most typical antecedent worlds satisfy the
    /// consequent.
    DefImplies(Box<Formula>, Box<Formula>),
    Sharpening(StandpointExpr, StandpointExpr),
    DefSharpening(StandpointExpr, StandpointExpr),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(e: StandpointExpr, f: Formula) -> Self {
        Formula::Box(e, Box::new(f))
    }

    pub fn diamond(e: StandpointExpr, f: Formula) -> Self {
        Formula::Diamond(e, Box::new(f))
    }

    pub fn def_box(e: StandpointExpr, f: Formula) -> Self {
        Formula::DefBox(e, Box::new(f))
    }

    pub fn def_diamond(e: StandpointExpr, f: Formula) -> Self {
        Formula::DefDiamond(e, Box::new(f))
    }

    pub fn def_implies(a: Formula, b: Formula) -> Self {
        Formula::DefImplies(Box::new(a), Box::new(b))
    }

    /// Conjunction of all formulas, `true` for an empty list.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(formulas: I) -> Self {
        formulas
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Formula size: every connective, atom and index symbol counts once.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::DefImplies(a, b) => 1 + a.size() + b.size(),
            Formula::Box(e, f)
            | Formula::Diamond(e, f)
            | Formula::DefBox(e, f)
            | Formula::DefDiamond(e, f) => 1 + e.size() + f.size(),
            Formula::Sharpening(e, d) | Formula::DefSharpening(e, d) => 1 + e.size() + d.size(),
        }
    }

    /// True when the formula only uses the primitive core connectives and
    /// every standpoint expression is expanded.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Top | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_core(),
            Formula::And(a, b) | Formula::DefImplies(a, b) => a.is_core() && b.is_core(),
            Formula::Box(e, f) | Formula::DefBox(e, f) => e.is_expanded() && f.is_core(),
            Formula::DefSharpening(e, d) => e.is_expanded() && d.is_expanded(),
            Formula::Bottom
            | Formula::Or(..)
            | Formula::Implies(..)
            | Formula::Iff(..)
            | Formula::Diamond(..)
            | Formula::DefDiamond(..)
            | Formula::Sharpening(..) => false,
        }
    }

    /// True when a defeasible construct occurs anywhere in the formula.
    pub fn is_defeasible(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) | Formula::Sharpening(..) => false,
            Formula::DefBox(..)
            | Formula::DefDiamond(..)
            | Formula::DefImplies(..)
            | Formula::DefSharpening(..) => true,
            Formula::Not(f) | Formula::Box(_, f) | Formula::Diamond(_, f) => f.is_defeasible(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_defeasible() || b.is_defeasible(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

/// Formula size as used for the tableau resource bounds.
pub fn formula_size(f: &Formula) -> usize {
    f.size()
}

/// A vocabulary: propositional atoms and (non-universal) standpoint names.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Vocabulary {
    pub prop_atoms: BTreeSet<String>,
    pub standpoints: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("identifier `{0}` is used both as an atom and as a standpoint")]
    Overlap(String),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("undeclared standpoint `{0}`")]
    UndeclaredStandpoint(String),
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
}

impl Vocabulary {
    pub fn new<A, S>(atoms: A, standpoints: S) -> Result<Self, VocabError>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let v = Vocabulary {
            prop_atoms: atoms.into_iter().map(Into::into).collect(),
            standpoints: standpoints.into_iter().map(Into::into).collect(),
        };
        v.check()?;
        Ok(v)
    }

    /// Checks disjointness of the two name sets.
    pub fn check(&self) -> Result<(), VocabError> {
        match self.prop_atoms.intersection(&self.standpoints).next() {
            Some(name) => Err(VocabError::Overlap(name.clone())),
            None => Ok(()),
        }
    }

    /// Rejects names that a user may not declare.
    pub fn check_user_names(&self) -> Result<(), VocabError> {
        for name in self.prop_atoms.iter().chain(&self.standpoints) {
            if name.ends_with(TILDE_SUFFIX) {
                return Err(VocabError::ReservedName(name.clone()));
            }
            if !lexer::is_identifier(name) {
                return Err(VocabError::InvalidIdentifier(name.clone()));
            }
        }
        for name in &self.prop_atoms {
            if name == "true" || name == "false" {
                return Err(VocabError::ReservedName(name.clone()));
            }
        }
        if self.standpoints.contains("u") {
            return Err(VocabError::ReservedName("u".into()));
        }
        Ok(())
    }

    pub fn merge(&self, other: &Vocabulary) -> Result<Vocabulary, VocabError> {
        let merged = Vocabulary {
            prop_atoms: self.prop_atoms.union(&other.prop_atoms).cloned().collect(),
            standpoints: self
                .standpoints
                .union(&other.standpoints)
                .cloned()
                .collect(),
        };
        merged.check()?;
        Ok(merged)
    }

    pub fn contains(&self, other: &Vocabulary) -> bool {
        other.prop_atoms.is_subset(&self.prop_atoms)
            && other.standpoints.is_subset(&self.standpoints)
    }
}

/// Collects the atoms and standpoint names that occur in `f`.
pub fn vocabulary_of(f: &Formula) -> Vocabulary {
    fn walk(f: &Formula, v: &mut Vocabulary) {
        match f {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(p) => {
                v.prop_atoms.insert(p.clone());
            }
            Formula::Not(g) => walk(g, v),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::DefImplies(a, b) => {
                walk(a, v);
                walk(b, v);
            }
            Formula::Box(e, g)
            | Formula::Diamond(e, g)
            | Formula::DefBox(e, g)
            | Formula::DefDiamond(e, g) => {
                v.standpoints.extend(e.atoms());
                walk(g, v);
            }
            Formula::Sharpening(e, d) | Formula::DefSharpening(e, d) => {
                v.standpoints.extend(e.atoms());
                v.standpoints.extend(d.atoms());
            }
        }
    }
    let mut v = Vocabulary::default();
    walk(f, &mut v);
    v
}

/// A finite knowledge base over a fixed vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub vocabulary: Vocabulary,
    pub formulas: Vec<Formula>,
}

impl KnowledgeBase {
    /// Builds a knowledge base, checking every formula against `vocabulary`.
    pub fn new(vocabulary: Vocabulary, formulas: Vec<Formula>) -> Result<Self, VocabError> {
        vocabulary.check()?;
        for f in &formulas {
            let used = vocabulary_of(f);
            if let Some(p) = used.prop_atoms.difference(&vocabulary.prop_atoms).next() {
                return Err(VocabError::UndeclaredAtom(p.clone()));
            }
            if let Some(s) = used.standpoints.difference(&vocabulary.standpoints).next() {
                return Err(VocabError::UndeclaredStandpoint(s.clone()));
            }
        }
        Ok(KnowledgeBase {
            vocabulary,
            formulas,
        })
    }

    /// Knowledge base whose vocabulary is inferred from its formulas.
    pub fn from_formulas(formulas: Vec<Formula>) -> Result<Self, VocabError> {
        let mut vocabulary = Vocabulary::default();
        for f in &formulas {
            vocabulary = vocabulary.merge(&vocabulary_of(f))?;
        }
        Ok(KnowledgeBase {
            vocabulary,
            formulas,
        })
    }

    /// Conjunction of the formulas in order; `true` when empty.
    pub fn conjunction(&self) -> Formula {
        Formula::conjunction(self.formulas.iter().cloned())
    }
}
