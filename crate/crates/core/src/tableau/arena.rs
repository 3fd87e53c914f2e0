use std::collections::HashMap;

use crate::normalize::{dnf_expr, to_dnf};
use crate::syntax::{print_formula, print_standpoint_expr, Formula, StandpointExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExprId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Top,
    Bottom,
    Atom(String),
    Not(FormulaId),
    And(FormulaId, FormulaId),
    Box(ExprId, FormulaId),
    DefBox(ExprId, FormulaId),
    DefImplies(FormulaId, FormulaId),
    DefSharpening(ExprId, ExprId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum ExprNode {
    Universal,
    Atom(String),
    Complement(ExprId),
    Intersection(ExprId, ExprId),
    Union(ExprId, ExprId),
}

/// One conjunct of an index: the atoms that select candidate labels and the
/// union of the negated atoms (absent for positive conjuncts).
#[derive(Debug, Clone)]
pub(crate) struct ConjunctView {
    pub positives: Vec<ExprId>,
    pub negated_union: Option<ExprId>,
}

/// Interned formulas and standpoint expressions of one tableau run. Every
/// formula and expression a rule can add is interned up front, so rule
/// application never extends the arena.
#[derive(Debug, Clone, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    trees: Vec<Formula>,
    formula_ids: HashMap<Formula, FormulaId>,
    negation: Vec<Option<FormulaId>>,
    exprs: Vec<ExprNode>,
    expr_trees: Vec<StandpointExpr>,
    expr_ids: HashMap<StandpointExpr, ExprId>,
    conjuncts: HashMap<ExprId, Vec<ConjunctView>>,
    complement_dnf: HashMap<ExprId, ExprId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a core formula in index normal form")]
pub struct NotInf(pub String);

impl Arena {
    pub(crate) fn node(&self, id: FormulaId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    pub(crate) fn expr(&self, id: ExprId) -> &ExprNode {
        &self.exprs[id.0 as usize]
    }

    pub fn formula(&self, id: FormulaId) -> &Formula {
        &self.trees[id.0 as usize]
    }

    pub fn standpoint_expr(&self, id: ExprId) -> &StandpointExpr {
        &self.expr_trees[id.0 as usize]
    }

    pub fn print_formula(&self, id: FormulaId) -> String {
        print_formula(self.formula(id))
    }

    pub fn print_expr(&self, id: ExprId) -> String {
        print_standpoint_expr(self.standpoint_expr(id))
    }

    pub fn find_formula(&self, f: &Formula) -> Option<FormulaId> {
        self.formula_ids.get(f).copied()
    }

    pub fn find_expr(&self, e: &StandpointExpr) -> Option<ExprId> {
        self.expr_ids.get(e).copied()
    }

    /// The interned negation; `!true` is represented by `false`.
    pub(crate) fn negation(&self, id: FormulaId) -> FormulaId {
        self.negation[id.0 as usize].expect("negation interned")
    }

    pub(crate) fn conjuncts(&self, e: ExprId) -> &[ConjunctView] {
        self.conjuncts.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn complement_dnf(&self, e: ExprId) -> ExprId {
        self.complement_dnf[&e]
    }

    pub(crate) fn universal(&self) -> ExprId {
        self.expr_ids[&StandpointExpr::Universal]
    }

    pub(crate) fn bottom(&self) -> FormulaId {
        self.formula_ids[&Formula::Bottom]
    }

    /// Interns `f` with everything the rules can derive from it.
    pub(crate) fn intern_root(&mut self, f: &Formula) -> Result<FormulaId, NotInf> {
        self.intern_expr(&StandpointExpr::Universal);
        self.intern_plain(Formula::Bottom);
        self.intern(f)
    }

    pub(crate) fn intern_standpoint_atom(&mut self, s: &str) -> ExprId {
        self.intern_expr(&StandpointExpr::atom(s))
    }

    fn intern_plain(&mut self, f: Formula) -> FormulaId {
        if let Some(&id) = self.formula_ids.get(&f) {
            return id;
        }
        let node = match &f {
            Formula::Top => Node::Top,
            Formula::Bottom => Node::Bottom,
            Formula::Atom(p) => Node::Atom(p.clone()),
            _ => unreachable!("only leaves are interned plainly"),
        };
        self.push(f, node)
    }

    fn push(&mut self, f: Formula, node: Node) -> FormulaId {
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.formula_ids.insert(f.clone(), id);
        self.trees.push(f);
        self.negation.push(None);
        id
    }

    fn intern(&mut self, f: &Formula) -> Result<FormulaId, NotInf> {
        if let Some(&id) = self.formula_ids.get(f) {
            if self.negation[id.0 as usize].is_some() {
                return Ok(id);
            }
        }
        let id = match f {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => self.intern_plain(f.clone()),
            Formula::Not(g) => {
                let g_id = self.intern(g)?;
                self.find_or_push(f, Node::Not(g_id))
            }
            Formula::And(a, b) => {
                let (a_id, b_id) = (self.intern(a)?, self.intern(b)?);
                self.find_or_push(f, Node::And(a_id, b_id))
            }
            Formula::DefImplies(a, b) => {
                let (a_id, b_id) = (self.intern(a)?, self.intern(b)?);
                self.find_or_push(f, Node::DefImplies(a_id, b_id))
            }
            Formula::Box(e, g) => {
                let e_id = self.intern_index(e, f)?;
                let g_id = self.intern(g)?;
                if let ExprNode::Union(..) = self.expr(e_id) {
                    if let StandpointExpr::Union(l, r) = e {
                        self.intern(&Formula::boxed((**l).clone(), (**g).clone()))?;
                        self.intern(&Formula::boxed((**r).clone(), (**g).clone()))?;
                    }
                }
                self.find_or_push(f, Node::Box(e_id, g_id))
            }
            Formula::DefBox(e, g) => {
                let e_id = self.intern_index(e, f)?;
                self.intern_domain(e_id);
                let g_id = self.intern(g)?;
                self.find_or_push(f, Node::DefBox(e_id, g_id))
            }
            Formula::DefSharpening(e, d) => {
                let e_id = self.intern_index(e, f)?;
                let d_id = self.intern_index(d, f)?;
                self.intern_domain(e_id);
                self.intern_domain(d_id);
                self.find_or_push(f, Node::DefSharpening(e_id, d_id))
            }
            _ => return Err(NotInf(print_formula(f))),
        };
        if self.negation[id.0 as usize].is_none() {
            let neg = match self.node(id) {
                Node::Top => self.intern_plain(Formula::Bottom),
                _ => {
                    let negated = Formula::not(f.clone());
                    self.find_or_push(&negated, Node::Not(id))
                }
            };
            self.negation[id.0 as usize] = Some(neg);
        }
        Ok(id)
    }

    fn find_or_push(&mut self, f: &Formula, node: Node) -> FormulaId {
        match self.formula_ids.get(f) {
            Some(&id) => id,
            None => self.push(f.clone(), node),
        }
    }

    /// Interns an index, which must already be a DNF embedding or the empty
    /// marker, together with its conjunct decomposition.
    fn intern_index(&mut self, e: &StandpointExpr, context: &Formula) -> Result<ExprId, NotInf> {
        if dnf_expr(e) != *e {
            return Err(NotInf(print_formula(context)));
        }
        let id = self.intern_expr(e);
        if !self.conjuncts.contains_key(&id) {
            let mut views = Vec::new();
            if let Ok(dnf) = to_dnf(e) {
                for c in &dnf.conjuncts {
                    let positives = c
                        .positives
                        .iter()
                        .map(|s| match s.as_str() {
                            crate::syntax::UNIVERSAL => {
                                self.intern_expr(&StandpointExpr::Universal)
                            }
                            _ => self.intern_expr(&StandpointExpr::atom(s.as_str())),
                        })
                        .collect();
                    let negated_union = c
                        .negatives
                        .iter()
                        .map(|s| StandpointExpr::atom(s.as_str()))
                        .reduce(StandpointExpr::union)
                        .map(|u| self.intern_expr(&u));
                    views.push(ConjunctView {
                        positives,
                        negated_union,
                    });
                }
            }
            self.conjuncts.insert(id, views);
        }
        Ok(id)
    }

    // Min-facts over `e` push the complement onto everything below.
    fn intern_domain(&mut self, e: ExprId) {
        if self.complement_dnf.contains_key(&e) {
            return;
        }
        let complement = dnf_expr(&StandpointExpr::complement(self.standpoint_expr(e).clone()));
        let c = self.intern_expr(&complement);
        self.complement_dnf.insert(e, c);
    }

    fn intern_expr(&mut self, e: &StandpointExpr) -> ExprId {
        if let Some(&id) = self.expr_ids.get(e) {
            return id;
        }
        let node = match e {
            StandpointExpr::Universal => ExprNode::Universal,
            StandpointExpr::Atom(s) => ExprNode::Atom(s.clone()),
            StandpointExpr::Complement(inner) => ExprNode::Complement(self.intern_expr(inner)),
            StandpointExpr::Intersection(a, b) => {
                ExprNode::Intersection(self.intern_expr(a), self.intern_expr(b))
            }
            StandpointExpr::Union(a, b) => {
                ExprNode::Union(self.intern_expr(a), self.intern_expr(b))
            }
            StandpointExpr::Difference(a, b) => {
                let rewritten = StandpointExpr::intersection(
                    (**a).clone(),
                    StandpointExpr::complement((**b).clone()),
                );
                return self.intern_expr(&rewritten);
            }
        };
        let id = ExprId(self.exprs.len() as u32);
        self.exprs.push(node);
        self.expr_trees.push(e.clone());
        self.expr_ids.insert(e.clone(), id);
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::to_inf;
    use crate::syntax::{expand_derived, parse_formula, VocabMode};

    fn inf(text: &str) -> Formula {
        to_inf(&expand_derived(
            &parse_formula(text, VocabMode::Inferred).unwrap().0,
        ))
    }

    #[test]
    fn negations_are_interned() {
        let mut a = Arena::default();
        let root = a.intern_root(&inf("p & [[s]] q")).unwrap();
        let neg = a.negation(root);
        assert_eq!(a.node(neg), &Node::Not(root));
        let q = a.find_formula(&Formula::atom("q")).unwrap();
        assert_eq!(a.node(a.negation(q)), &Node::Not(q));
    }

    #[test]
    fn union_boxes_are_split_ahead_of_time() {
        let mut a = Arena::default();
        a.intern_root(&inf("[-(s & t)] p")).unwrap();
        let left = inf("[* & -s] p");
        let right = inf("[* & -t] p");
        assert!(a.find_formula(&left).is_some());
        assert!(a.find_formula(&right).is_some());
    }

    #[test]
    fn non_inf_input_is_rejected() {
        let mut a = Arena::default();
        let f = parse_formula("p | q", VocabMode::Inferred).unwrap().0;
        assert!(a.intern_root(&f).is_err());
        let g = parse_formula("[-(s & t)] p", VocabMode::Inferred)
            .unwrap()
            .0;
        assert!(a.intern_root(&g).is_err());
    }

    #[test]
    fn conjunct_views() {
        let mut a = Arena::default();
        a.intern_root(&inf("[[s & -t & -r u q]] p")).unwrap();
        let e = a
            .find_expr(&crate::normalize::dnf_expr(
                &crate::syntax::parse_standpoint_expr("s & -t & -r u q").unwrap(),
            ))
            .unwrap();
        let views = a.conjuncts(e);
        assert_eq!(views.len(), 2);
        let negated: Vec<String> = views
            .iter()
            .filter_map(|v| v.negated_union.map(|u| a.print_expr(u)))
            .collect();
        assert_eq!(negated, vec!["r u t"]);
        assert!(views.iter().all(|v| v.positives.len() == 1));
    }
}
