//! Decision procedures on top of the tableau: satisfiability, preferential
//! entailment and the translation of the defeasible fragment into classical
//! standpoint logic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use thiserror::Error;

use crate::normalize::to_inf;
use crate::semantics::{satisfies, satisfies_globally, Spss};
use crate::syntax::{
    expand_derived, print_formula, print_standpoint_expr, vocabulary_of, Formula, KnowledgeBase,
    StandpointExpr, TILDE_SUFFIX, UNIVERSAL,
};
use crate::tableau::{Limits, ResourceExceeded, Stats, Tableau, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("{0}")]
    ResourceExceeded(ResourceExceeded),
    /// The extracted model failed verification. Never expected.
    #[error("internal soundness error: {0}")]
    InternalSoundness(String),
}

impl ReasonerError {
    pub fn stats(&self) -> Option<Stats> {
        match self {
            ReasonerError::ResourceExceeded(e) => Some(e.stats),
            ReasonerError::InternalSoundness(_) => None,
        }
    }
}

/// Knobs shared by all queries.
#[derive(Default)]
pub struct QueryOptions<'a> {
    /// Defaults to [`Limits::for_formula`] of the tableau input.
    pub limits: Option<Limits>,
    /// Standpoints that must be nonempty in any returned model, on top of
    /// those occurring in the input.
    pub standpoints: BTreeSet<String>,
    pub trace: Option<&'a mut dyn Write>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    /// A verified model when satisfiable; the formula holds at `pi0`.
    pub model: Option<Spss>,
    pub stats: Stats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.model.is_some()
    }
}

/// Local satisfiability: expand, normalize and run the tableau.
pub fn local_sat(f: &Formula, opts: QueryOptions<'_>) -> Result<SatResult, ReasonerError> {
    let core = to_inf(&expand_derived(f));
    // Names can vanish during normalization (`{t} <= {t}` has an empty index)
    // but the model must still interpret them.
    let names = opts
        .standpoints
        .iter()
        .cloned()
        .chain(vocabulary_of(f).standpoints);
    let tableau = Tableau::with_standpoints(&core, names)
        .map_err(|e| ReasonerError::InternalSoundness(e.to_string()))?;
    let limits = opts.limits.unwrap_or_else(|| Limits::for_formula(&core));
    let run = tableau.saturate(limits, opts.trace);
    match run.verdict {
        Verdict::Unsat => Ok(SatResult {
            model: None,
            stats: run.stats,
        }),
        Verdict::ResourceExceeded(e) => Err(ReasonerError::ResourceExceeded(e)),
        Verdict::Sat(branch) => {
            let model = tableau
                .extract_model(&branch)
                .map_err(|e| ReasonerError::InternalSoundness(e.to_string()))?;
            if satisfies(&model, 0, f) != Ok(true) {
                return Err(ReasonerError::InternalSoundness(format!(
                    "model does not satisfy {}",
                    print_formula(f)
                )));
            }
            Ok(SatResult {
                model: Some(model),
                stats: run.stats,
            })
        }
    }
}

/// Global satisfiability via `[*] f`.
pub fn global_sat(f: &Formula, opts: QueryOptions<'_>) -> Result<SatResult, ReasonerError> {
    let result = local_sat(&Formula::boxed(StandpointExpr::Universal, f.clone()), opts)?;
    if let Some(model) = &result.model {
        if satisfies_globally(model, f) != Ok(true) {
            return Err(ReasonerError::InternalSoundness(format!(
                "model does not globally satisfy {}",
                print_formula(f)
            )));
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentResult {
    pub entailed: bool,
    /// Globally satisfies the knowledge base and falsifies the query at `pi0`.
    pub countermodel: Option<Spss>,
    pub kb_globally_satisfiable: bool,
    /// Both tableau runs combined.
    pub stats: Stats,
}

impl EntailmentResult {
    /// Entailed only because the knowledge base has no model.
    pub fn is_vacuous(&self) -> bool {
        self.entailed && !self.kb_globally_satisfiable
    }
}

fn combine(a: Stats, b: Stats) -> Stats {
    Stats {
        steps: a.steps + b.steps,
        labels: a.labels.max(b.labels),
        max_depth: a.max_depth.max(b.max_depth),
        closed_branches: a.closed_branches + b.closed_branches,
    }
}

/// Preferential entailment: the query holds in every structure globally
/// satisfying the knowledge base. Decided as unsatisfiability of
/// `[*](⋀K) & !query` once the knowledge base is known to be satisfiable.
pub fn preferential_entails(
    kb: &KnowledgeBase,
    query: &Formula,
    mut opts: QueryOptions<'_>,
) -> Result<EntailmentResult, ReasonerError> {
    let kb_formula = kb.conjunction();
    opts.standpoints
        .extend(kb.vocabulary.standpoints.iter().cloned());
    let consistency = global_sat(
        &kb_formula,
        QueryOptions {
            limits: opts.limits,
            standpoints: opts.standpoints.clone(),
            trace: None,
        },
    )?;
    if !consistency.is_sat() {
        return Ok(EntailmentResult {
            entailed: true,
            countermodel: None,
            kb_globally_satisfiable: false,
            stats: consistency.stats,
        });
    }
    let probe = Formula::and(
        Formula::boxed(StandpointExpr::Universal, kb_formula),
        Formula::not(query.clone()),
    );
    let result = local_sat(&probe, opts)?;
    Ok(EntailmentResult {
        entailed: !result.is_sat(),
        countermodel: result.model,
        kb_globally_satisfiable: true,
        stats: combine(consistency.stats, result.stats),
    })
}

/// Which indexes the translation accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FragmentMode {
    /// Standpoint names and `*` only.
    #[default]
    Strict,
    /// Any index; each distinct expression gets its own tilde standpoint.
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not in the translatable fragment: {0}")]
pub struct NotInFragment(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslatedFormula {
    pub formula: Formula,
    /// Source index → tilde standpoint standing for its typical members.
    pub mapping: BTreeMap<StandpointExpr, String>,
    pub warnings: Vec<String>,
}

struct Translator {
    mode: FragmentMode,
    taken: BTreeSet<String>,
    mapping: BTreeMap<StandpointExpr, String>,
    next_generated: usize,
}

impl Translator {
    fn check_index(&self, e: &StandpointExpr) -> Result<(), NotInFragment> {
        let atomic = matches!(e, StandpointExpr::Universal | StandpointExpr::Atom(_));
        if self.mode == FragmentMode::Strict && !atomic {
            return Err(NotInFragment(format!(
                "complex index `{}`",
                print_standpoint_expr(e)
            )));
        }
        Ok(())
    }

    fn tilde(&mut self, e: &StandpointExpr) -> Result<StandpointExpr, NotInFragment> {
        self.check_index(e)?;
        if let Some(name) = self.mapping.get(e) {
            return Ok(StandpointExpr::atom(name.clone()));
        }
        let name = match e {
            StandpointExpr::Universal => format!("{UNIVERSAL}{TILDE_SUFFIX}"),
            StandpointExpr::Atom(s) => format!("{s}{TILDE_SUFFIX}"),
            _ => loop {
                self.next_generated += 1;
                let base = format!("x{}", self.next_generated);
                if !self.taken.contains(&base) {
                    break format!("{base}{TILDE_SUFFIX}");
                }
            },
        };
        self.mapping.insert(e.clone(), name.clone());
        Ok(StandpointExpr::atom(name))
    }

    fn go(&mut self, f: &Formula) -> Result<Formula, NotInFragment> {
        Ok(match f {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
            Formula::Not(g) => Formula::not(self.go(g)?),
            Formula::And(a, b) => Formula::and(self.go(a)?, self.go(b)?),
            Formula::Or(a, b) => Formula::or(self.go(a)?, self.go(b)?),
            Formula::Implies(a, b) => Formula::implies(self.go(a)?, self.go(b)?),
            Formula::Iff(a, b) => Formula::iff(self.go(a)?, self.go(b)?),
            Formula::Box(e, g) => {
                self.check_index(e)?;
                Formula::boxed(e.clone(), self.go(g)?)
            }
            Formula::Diamond(e, g) => {
                self.check_index(e)?;
                Formula::diamond(e.clone(), self.go(g)?)
            }
            Formula::Sharpening(e, d) => {
                self.check_index(e)?;
                self.check_index(d)?;
                f.clone()
            }
            Formula::DefBox(e, g) => Formula::boxed(self.tilde(e)?, self.go(g)?),
            Formula::DefDiamond(e, g) => Formula::diamond(self.tilde(e)?, self.go(g)?),
            Formula::DefSharpening(e, d) => {
                self.check_index(d)?;
                Formula::Sharpening(self.tilde(e)?, d.clone())
            }
            Formula::DefImplies(..) => return Err(NotInFragment("contains ⇝".into())),
        })
    }
}

/// Replaces every defeasible box over `e` by a strict box over the tilde
/// standpoint `e~`, and `e <~ d` by `e~ <= d`. No axioms relating `e~` to
/// `e` are added.
pub fn translate_restricted(
    f: &Formula,
    mode: FragmentMode,
) -> Result<TranslatedFormula, NotInFragment> {
    let mut t = Translator {
        mode,
        taken: vocabulary_of(f).standpoints,
        mapping: BTreeMap::new(),
        next_generated: 0,
    };
    let formula = t.go(f)?;
    let mut warnings = Vec::new();
    if mode == FragmentMode::Permissive
        && t.mapping
            .keys()
            .any(|e| !matches!(e, StandpointExpr::Universal | StandpointExpr::Atom(_)))
    {
        warnings.push(
            "complex indexes translated; the tilde vocabulary can grow doubly exponentially".into(),
        );
    }
    Ok(TranslatedFormula {
        formula,
        mapping: t.mapping,
        warnings,
    })
}

/// Outcome of one side of a cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideVerdict {
    Sat(Spss),
    Unsat(Stats),
    Failed(String),
}

impl SideVerdict {
    fn of(result: Result<SatResult, ReasonerError>) -> Self {
        match result {
            Ok(SatResult { model: Some(m), .. }) => SideVerdict::Sat(m),
            Ok(SatResult { model: None, stats }) => SideVerdict::Unsat(stats),
            Err(e) => SideVerdict::Failed(e.to_string()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SideVerdict::Sat(_) => "sat",
            SideVerdict::Unsat(_) => "unsat",
            SideVerdict::Failed(_) => "failed",
        }
    }

    fn witness(&self) -> String {
        match self {
            SideVerdict::Sat(m) => format!(
                "model {}",
                serde_json::to_string(&m.to_json()).expect("model serializes")
            ),
            SideVerdict::Unsat(s) => format!(
                "closed tableau ({} steps, {} branches)",
                s.steps, s.closed_branches
            ),
            SideVerdict::Failed(e) => e.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckEntry {
    pub formula: Formula,
    pub translated: Result<Formula, NotInFragment>,
    pub original: SideVerdict,
    pub translation: Option<SideVerdict>,
}

impl CrossCheckEntry {
    pub fn agrees(&self) -> bool {
        match &self.translation {
            Some(t) => t.label() == self.original.label(),
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrossCheckReport {
    pub entries: Vec<CrossCheckEntry>,
}

impl CrossCheckReport {
    pub fn agreements(&self) -> usize {
        self.entries.iter().filter(|e| e.agrees()).count()
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &CrossCheckEntry> {
        self.entries.iter().filter(|e| !e.agrees())
    }
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} formulas, {} agreements, {} discrepancies",
            self.entries.len(),
            self.agreements(),
            self.entries.len() - self.agreements()
        )?;
        for e in &self.entries {
            let status = if e.agrees() { "agree" } else { "DISCREPANCY" };
            let translated = match &e.translated {
                Ok(t) => print_formula(t),
                Err(err) => err.to_string(),
            };
            let right = e.translation.as_ref().map_or("-", SideVerdict::label);
            writeln!(
                f,
                "{status}: {} [{}] | {translated} [{right}]",
                print_formula(&e.formula),
                e.original.label()
            )?;
            if !e.agrees() {
                writeln!(f, "  original: {}", e.original.witness())?;
                if let Some(t) = &e.translation {
                    writeln!(f, "  translated: {}", t.witness())?;
                }
            }
        }
        Ok(())
    }
}

/// Decides every formula and its translation and lists where they differ.
pub fn cross_check_translation(corpus: &[Formula], limits: Option<Limits>) -> CrossCheckReport {
    let entries = corpus
        .iter()
        .map(|f| {
            let opts = || QueryOptions {
                limits,
                ..QueryOptions::default()
            };
            let original = SideVerdict::of(local_sat(f, opts()));
            let translated = translate_restricted(f, FragmentMode::Strict).map(|t| t.formula);
            let translation = translated
                .as_ref()
                .ok()
                .map(|t| SideVerdict::of(local_sat(t, opts())));
            CrossCheckEntry {
                formula: f.clone(),
                translated,
                original,
                translation,
            }
        })
        .collect();
    CrossCheckReport { entries }
}
