use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::arena::{ExprNode, Node};
use super::rules::Below;
use super::{Branch, Tableau};
use crate::semantics::{satisfies, validate_spss, Spss};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("branch is closed")]
    ClosedBranch,
    #[error("branch is not saturated")]
    NotSaturated,
    #[error("extracted structure failed verification: {0}")]
    Unverified(String),
}

impl Tableau {
    /// Reads a structure off an open saturated branch: one precisification
    /// `pi<n>` per label, memberships and valuations from the exact facts,
    /// preference by transitive closure. The result is checked against the
    /// root formula before it is returned.
    pub fn extract_model(&self, b: &Branch) -> Result<Spss, ExtractError> {
        if b.closed {
            return Err(ExtractError::ClosedBranch);
        }
        if !self.is_saturated(b) {
            return Err(ExtractError::NotSaturated);
        }
        let n = b.next_fresh.0 as usize;
        let mut sigma: BTreeMap<String, BTreeSet<usize>> = self
            .standpoints
            .iter()
            .map(|(s, _)| (s.clone(), BTreeSet::new()))
            .collect();
        for &(label, e) in &b.skeleton {
            if let ExprNode::Atom(s) = self.arena.expr(e) {
                sigma.entry(s.clone()).or_default().insert(label.0 as usize);
            }
        }
        let mut gamma = vec![BTreeSet::new(); n];
        for &(label, f) in &b.sentences {
            if let Node::Atom(p) = self.arena.node(f) {
                gamma[label.0 as usize].insert(p.clone());
            }
        }
        let prec = Below::of(b)
            .pairs()
            .map(|(x, y)| (x.0 as usize, y.0 as usize))
            .collect();
        let model = Spss {
            precisifications: (0..n).map(|i| format!("pi{i}")).collect(),
            sigma,
            gamma,
            prec,
        };
        if let Err(violations) = validate_spss(&model) {
            let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(ExtractError::Unverified(text.join("; ")));
        }
        match satisfies(&model, 0, &self.root_formula) {
            Ok(true) => Ok(model),
            Ok(false) => Err(ExtractError::Unverified(
                "root formula is false at pi0".to_string(),
            )),
            Err(e) => Err(ExtractError::Unverified(e.to_string())),
        }
    }
}
