use std::collections::BTreeMap;

use thiserror::Error;

use super::worlds::WorldSet;
use crate::syntax::{Formula, StandpointExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown standpoint `{0}`")]
    UnknownStandpoint(String),
    #[error("precisification index {0} out of range")]
    UnknownPrecisification(usize),
}

/// A structure in evaluation form: every relation is a world set.
///
/// `below[i]` holds the precisifications strictly preferred to `i`; it is
/// expected to be transitively closed. Atoms missing from `valuation` are
/// false everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Structure<W> {
    pub worlds: usize,
    pub sigma: BTreeMap<String, W>,
    pub valuation: BTreeMap<String, W>,
    pub below: Vec<W>,
}

impl<W: WorldSet> Structure<W> {
    pub fn sigma_of(&self, e: &StandpointExpr) -> Result<W, EvalError> {
        let n = self.worlds;
        Ok(match e {
            StandpointExpr::Universal => W::full(n),
            StandpointExpr::Atom(s) => self
                .sigma
                .get(s)
                .cloned()
                .ok_or_else(|| EvalError::UnknownStandpoint(s.clone()))?,
            StandpointExpr::Complement(inner) => self.sigma_of(inner)?.complement(n),
            StandpointExpr::Intersection(a, b) => self.sigma_of(a)?.meet(&self.sigma_of(b)?),
            StandpointExpr::Union(a, b) => self.sigma_of(a)?.join(&self.sigma_of(b)?),
            StandpointExpr::Difference(a, b) => {
                self.sigma_of(a)?.meet(&self.sigma_of(b)?.complement(n))
            }
        })
    }

    /// The ≺-minimal members of `x`.
    pub fn minimal(&self, x: &W) -> W {
        let mut out = W::empty(self.worlds);
        for i in 0..self.worlds {
            if x.contains(i) && !self.below[i].intersects(x) {
                out.insert(i);
            }
        }
        out
    }

    /// The set of precisifications at which `f` holds.
    pub fn extension(&self, f: &Formula) -> Result<W, EvalError> {
        let n = self.worlds;
        let all_or_nothing = |b: bool| if b { W::full(n) } else { W::empty(n) };
        Ok(match f {
            Formula::Top => W::full(n),
            Formula::Bottom => W::empty(n),
            Formula::Atom(p) => self
                .valuation
                .get(p)
                .cloned()
                .unwrap_or_else(|| W::empty(n)),
            Formula::Not(g) => self.extension(g)?.complement(n),
            Formula::And(a, b) => self.extension(a)?.meet(&self.extension(b)?),
            Formula::Or(a, b) => self.extension(a)?.join(&self.extension(b)?),
            Formula::Implies(a, b) => self.extension(a)?.complement(n).join(&self.extension(b)?),
            Formula::Iff(a, b) => {
                let (a, b) = (self.extension(a)?, self.extension(b)?);
                a.meet(&b).join(&a.complement(n).meet(&b.complement(n)))
            }
            Formula::Box(e, g) => all_or_nothing(self.sigma_of(e)?.is_subset(&self.extension(g)?)),
            Formula::Diamond(e, g) => {
                all_or_nothing(self.sigma_of(e)?.intersects(&self.extension(g)?))
            }
            Formula::DefBox(e, g) => {
                let typical = self.minimal(&self.sigma_of(e)?);
                all_or_nothing(typical.is_subset(&self.extension(g)?))
            }
            Formula::DefDiamond(e, g) => {
                let typical = self.minimal(&self.sigma_of(e)?);
                all_or_nothing(typical.intersects(&self.extension(g)?))
            }
            Formula::DefImplies(a, b) => {
                let typical = self.minimal(&self.extension(a)?);
                typical.complement(n).join(&self.extension(b)?)
            }
            Formula::Sharpening(e, d) => {
                all_or_nothing(self.sigma_of(e)?.is_subset(&self.sigma_of(d)?))
            }
            Formula::DefSharpening(e, d) => {
                let typical = self.minimal(&self.sigma_of(e)?);
                all_or_nothing(typical.is_subset(&self.sigma_of(d)?))
            }
        })
    }

    pub fn satisfies(&self, world: usize, f: &Formula) -> Result<bool, EvalError> {
        if world >= self.worlds {
            return Err(EvalError::UnknownPrecisification(world));
        }
        Ok(self.extension(f)?.contains(world))
    }

    pub fn satisfies_globally(&self, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.extension(f)? == W::full(self.worlds))
    }
}
