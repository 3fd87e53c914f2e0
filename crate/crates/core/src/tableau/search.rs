use std::fmt;
use std::io::Write;

use super::rules::{uses_fresh, Addition};
use super::{Branch, Label, RuleInstance, Tableau, TableauError};
use crate::syntax::formula_size;

/// Resource guards for one saturation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_depth: usize,
    pub max_labels: usize,
    pub max_steps: usize,
}

impl Limits {
    /// Defaults scaled by the size `m` of the root formula: depth
    /// `10·m⁶ + 100`, labels `64·m²`, steps `10⁶`.
    pub fn for_size(m: usize) -> Self {
        let m6 = (0..6).fold(1usize, |acc, _| acc.saturating_mul(m));
        Limits {
            max_depth: m6.saturating_mul(10).saturating_add(100),
            max_labels: m.saturating_mul(m).saturating_mul(64).max(64),
            max_steps: 1_000_000,
        }
    }

    pub fn for_formula(f: &crate::syntax::Formula) -> Self {
        Self::for_size(formula_size(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    /// Rule applications.
    pub steps: usize,
    /// Most labels on any branch.
    pub labels: usize,
    /// Longest branch, in rule applications.
    pub max_depth: usize,
    /// Branches closed.
    pub closed_branches: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Depth,
    Labels,
    Steps,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Depth => "max_depth",
            LimitKind::Labels => "max_labels",
            LimitKind::Steps => "max_steps",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceExceeded {
    pub limit: LimitKind,
    pub stats: Stats,
}

impl fmt::Display for ResourceExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} exceeded after {} steps ({} labels, depth {})",
            self.limit, self.stats.steps, self.stats.labels, self.stats.max_depth
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// An open saturated branch.
    Sat(Box<Branch>),
    Unsat,
    ResourceExceeded(ResourceExceeded),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauRun {
    pub verdict: Verdict,
    pub stats: Stats,
}

impl Tableau {
    /// Applies a rule instance, one successor per denominator alternative in
    /// printed order.
    pub fn apply_rule(&self, b: &Branch, r: &RuleInstance) -> Result<Vec<Branch>, TableauError> {
        if !self.applicable_rules(b).contains(r) {
            return Err(TableauError::NotApplicable(r.name().to_string()));
        }
        Ok(self.successors(b, r).into_iter().map(|(b, _)| b).collect())
    }

    fn successors(&self, b: &Branch, r: &RuleInstance) -> Vec<(Branch, Vec<Addition>)> {
        let fresh = b.next_fresh;
        let bottom = self.arena.bottom();
        self.denominator(b, r)
            .into_iter()
            .enumerate()
            .map(|(i, alt)| {
                let mut next = b.clone();
                for &a in &alt {
                    match a {
                        Addition::Sentence(n, f) => {
                            next.sentences.insert((n, f));
                            next.closed |= f == bottom;
                        }
                        Addition::Member(n, e) => {
                            next.skeleton.insert((n, e));
                        }
                        Addition::Prec(x, y) => {
                            next.prec.insert((x, y));
                        }
                        Addition::Min(n, d) => {
                            next.min_facts.insert((n, d));
                        }
                    }
                }
                if uses_fresh(&alt, fresh) {
                    next.next_fresh = Label(fresh.0 + 1);
                }
                next.depth += 1;
                next.id = format!("{}.{}", b.id, i);
                (next, alt)
            })
            .collect()
    }

    /// Depth-first saturation from the initial branch.
    pub fn saturate(&self, limits: Limits, mut trace: Option<&mut dyn Write>) -> TableauRun {
        let mut stats = Stats::default();
        let mut stack = vec![self.init()];
        let exceeded = |limit, stats: Stats| TableauRun {
            verdict: Verdict::ResourceExceeded(ResourceExceeded { limit, stats }),
            stats,
        };
        while let Some(b) = stack.pop() {
            stats.labels = stats.labels.max(b.next_fresh.0 as usize);
            stats.max_depth = stats.max_depth.max(b.depth);
            if b.closed {
                stats.closed_branches += 1;
                continue;
            }
            if b.depth > limits.max_depth {
                return exceeded(LimitKind::Depth, stats);
            }
            if b.next_fresh.0 as usize > limits.max_labels {
                return exceeded(LimitKind::Labels, stats);
            }
            let Some(rule) = self.first_rule(&b) else {
                return TableauRun {
                    verdict: Verdict::Sat(Box::new(b)),
                    stats,
                };
            };
            if stats.steps >= limits.max_steps {
                return exceeded(LimitKind::Steps, stats);
            }
            stats.steps += 1;
            let fresh = b.next_fresh;
            let mut successors = self.successors(&b, &rule);
            if let Some(out) = trace.as_deref_mut() {
                for (child, alt) in &successors {
                    let added: Vec<String> = alt.iter().map(|a| self.print_addition(a)).collect();
                    // Trace output is best effort.
                    let _ = writeln!(
                        out,
                        "STEP {} | RULE {} | {} | added: {}",
                        stats.steps,
                        rule.name(),
                        child.id,
                        added.join(", ")
                    );
                }
            }
            // Alternatives without a fresh label are explored first.
            successors.sort_by_key(|(_, alt)| uses_fresh(alt, fresh));
            stack.extend(successors.into_iter().rev().map(|(b, _)| b));
        }
        TableauRun {
            verdict: Verdict::Unsat,
            stats,
        }
    }

    pub(crate) fn print_addition(&self, a: &Addition) -> String {
        match *a {
            Addition::Sentence(n, f) => format!("{n}::{}", self.arena.print_formula(f)),
            Addition::Member(n, e) => format!("{n} in W[{}]", self.arena.print_expr(e)),
            Addition::Prec(x, y) => format!("{x} < {y}"),
            Addition::Min(n, d) => format!("{n} in {}", self.print_domain(d)),
        }
    }
}
