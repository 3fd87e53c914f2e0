//! Labelled tableau for local satisfiability.
//!
//! A [`Tableau`] owns the interned vocabulary of one root formula; branches
//! are plain values that refer to it by id. Search is depth-first with an
//! explicit stack of pending alternatives.

mod arena;
mod extract;
mod rules;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use arena::{Arena, ExprId, FormulaId, NotInf};
pub use extract::ExtractError;
pub use rules::{Addition, RuleInstance};
pub use search::{LimitKind, Limits, ResourceExceeded, Stats, TableauRun, Verdict};

use crate::syntax::{vocabulary_of, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The set a minimality fact ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    /// Labels in W_e.
    Standpoint(ExprId),
    /// Labels carrying the formula.
    Formula(FormulaId),
}

/// One branch: labelled sentences, skeleton, preference pairs and
/// minimality facts. Everything only ever grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub sentences: BTreeSet<(Label, FormulaId)>,
    pub skeleton: BTreeSet<(Label, ExprId)>,
    pub prec: BTreeSet<(Label, Label)>,
    pub min_facts: BTreeSet<(Label, Domain)>,
    pub next_fresh: Label,
    pub closed: bool,
    /// Rule applications on the path from the root.
    pub depth: usize,
    /// Dotted path of alternative indices, `0` for the root.
    pub id: String,
}

impl Branch {
    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.next_fresh.0).map(Label)
    }

    pub fn has_sentence(&self, n: Label, f: FormulaId) -> bool {
        self.sentences.contains(&(n, f))
    }

    pub fn has_fact(&self, n: Label, e: ExprId) -> bool {
        self.skeleton.contains(&(n, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(transparent)]
    NotInf(#[from] NotInf),
    #[error("rule {0} is not applicable to the branch")]
    NotApplicable(String),
}

/// A tableau for one root formula (core, index normal form).
#[derive(Debug, Clone)]
pub struct Tableau {
    arena: Arena,
    root: FormulaId,
    root_formula: Formula,
    standpoints: Vec<(String, ExprId)>,
}

impl Tableau {
    pub fn new(f: &Formula) -> Result<Self, TableauError> {
        Self::with_standpoints(f, std::iter::empty::<String>())
    }

    /// Like [`Tableau::new`], additionally requiring every listed standpoint
    /// to be nonempty in the extracted model.
    pub fn with_standpoints<I>(f: &Formula, extra: I) -> Result<Self, TableauError>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let mut arena = Arena::default();
        let root = arena.intern_root(f)?;
        let mut names: BTreeSet<String> = vocabulary_of(f).standpoints;
        names.extend(extra.into_iter().map(Into::into));
        let standpoints = names
            .into_iter()
            .map(|s| {
                let id = arena.intern_standpoint_atom(&s);
                (s, id)
            })
            .collect();
        Ok(Tableau {
            arena,
            root,
            root_formula: f.clone(),
            standpoints,
        })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn root(&self) -> FormulaId {
        self.root
    }

    pub fn root_formula(&self) -> &Formula {
        &self.root_formula
    }

    /// The initial branch `({0::f}, ∅, ∅)`.
    pub fn init(&self) -> Branch {
        Branch {
            sentences: BTreeSet::from([(Label(0), self.root)]),
            skeleton: BTreeSet::new(),
            prec: BTreeSet::new(),
            min_facts: BTreeSet::new(),
            next_fresh: Label(1),
            closed: self.root == self.arena.bottom(),
            depth: 0,
            id: "0".to_string(),
        }
    }

    pub fn is_closed(&self, b: &Branch) -> bool {
        b.closed
    }

    pub fn is_saturated(&self, b: &Branch) -> bool {
        self.first_rule(b).is_none()
    }

    /// Human-readable form of a branch, one item per line.
    pub fn describe(&self, b: &Branch) -> String {
        let mut out = String::new();
        for &(n, f) in &b.sentences {
            out.push_str(&format!("{n}::{}\n", self.arena.print_formula(f)));
        }
        for &(n, e) in &b.skeleton {
            out.push_str(&format!("{n} in W[{}]\n", self.arena.print_expr(e)));
        }
        for &(a, c) in &b.prec {
            out.push_str(&format!("{a} < {c}\n"));
        }
        for &(n, d) in &b.min_facts {
            out.push_str(&format!("{n} in {}\n", self.print_domain(d)));
        }
        out
    }

    pub(crate) fn print_domain(&self, d: Domain) -> String {
        match d {
            Domain::Standpoint(e) => format!("min W[{}]", self.arena.print_expr(e)),
            Domain::Formula(f) => format!("min W^({})", self.arena.print_formula(f)),
        }
    }
}
