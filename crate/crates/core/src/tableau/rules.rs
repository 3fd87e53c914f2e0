use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::arena::{ExprNode, Node};
use super::{Branch, Domain, ExprId, FormulaId, Label, Tableau};

/// One item a rule adds to a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Addition {
    Sentence(Label, FormulaId),
    Member(Label, ExprId),
    Prec(Label, Label),
    Min(Label, Domain),
}

impl Addition {
    fn mentions(&self, n: Label) -> bool {
        match *self {
            Addition::Sentence(a, _) | Addition::Member(a, _) | Addition::Min(a, _) => a == n,
            Addition::Prec(a, c) => a == n || c == n,
        }
    }
}

/// A matched rule: the rule and the numerator bindings. `n` is the label of
/// the main sentence, `target` the label picked from a Γ-condition and
/// `conjunct` the index of the matched conjunct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleInstance {
    Bottom {
        n: Label,
        f: FormulaId,
    },
    BottomMinus {
        n: Label,
        e: ExprId,
    },
    BottomPrec {
        n: Label,
        domain: Domain,
        below: Label,
    },
    Neg {
        n: Label,
        f: FormulaId,
    },
    And {
        n: Label,
        f: FormulaId,
    },
    Or {
        n: Label,
        f: FormulaId,
    },
    Inter {
        n: Label,
        e: ExprId,
    },
    Union {
        n: Label,
        e: ExprId,
    },
    Star1 {
        n: Label,
    },
    Star2 {
        n: Label,
    },
    Diamond {
        n: Label,
        f: FormulaId,
    },
    BoxUnion {
        n: Label,
        f: FormulaId,
    },
    BoxC {
        n: Label,
        f: FormulaId,
        target: Label,
    },
    BoxCPlus {
        n: Label,
        f: FormulaId,
        target: Label,
    },
    DPos {
        n: Label,
        f: FormulaId,
    },
    DefImplies {
        n: Label,
        f: FormulaId,
    },
    NotDefImplies {
        n: Label,
        f: FormulaId,
    },
    MinBelow {
        n: Label,
        domain: Domain,
        below: Label,
    },
    Sharp {
        n: Label,
        f: FormulaId,
        conjunct: usize,
        target: Label,
    },
    SharpPlus {
        n: Label,
        f: FormulaId,
        conjunct: usize,
        target: Label,
    },
    NotSharp {
        n: Label,
        f: FormulaId,
    },
    DefBox {
        n: Label,
        f: FormulaId,
        conjunct: usize,
        target: Label,
    },
    DefBoxPlus {
        n: Label,
        f: FormulaId,
        conjunct: usize,
        target: Label,
    },
    NonEmpty {
        s: ExprId,
    },
}

impl RuleInstance {
    pub fn name(&self) -> &'static str {
        match self {
            RuleInstance::Bottom { .. } => "⊥",
            RuleInstance::BottomMinus { .. } => "⊥₋",
            RuleInstance::BottomPrec { .. } => "⊥_≺",
            RuleInstance::Neg { .. } => "¬",
            RuleInstance::And { .. } => "∧",
            RuleInstance::Or { .. } => "∨",
            RuleInstance::Inter { .. } => "∩",
            RuleInstance::Union { .. } => "∪",
            RuleInstance::Star1 { .. } => "*₁",
            RuleInstance::Star2 { .. } => "*₂",
            RuleInstance::Diamond { .. } => "◇_e",
            RuleInstance::BoxUnion { .. } => "□_{e∪d}",
            RuleInstance::BoxC { .. } => "□_c",
            RuleInstance::BoxCPlus { .. } => "□_{c+}",
            RuleInstance::DPos { .. } => "dpos_e",
            RuleInstance::DefImplies { .. } => "⇝",
            RuleInstance::NotDefImplies { .. } => "̸⇝",
            RuleInstance::MinBelow { .. } => "min-below",
            RuleInstance::Sharp { .. } => "≲",
            RuleInstance::SharpPlus { .. } => "≲+",
            RuleInstance::NotSharp { .. } => "≴",
            RuleInstance::DefBox { .. } => "⊨~",
            RuleInstance::DefBoxPlus { .. } => "⊨~+",
            RuleInstance::NonEmpty { .. } => "nonempty-S",
        }
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Strict predecessors of every label under the transitive closure of the
/// branch's preference pairs.
pub(crate) struct Below(BTreeMap<Label, BTreeSet<Label>>);

impl Below {
    pub(crate) fn of(b: &Branch) -> Self {
        let mut map: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        for &(a, c) in &b.prec {
            map.entry(c).or_default().insert(a);
        }
        loop {
            let mut changed = false;
            let keys: Vec<Label> = map.keys().copied().collect();
            for c in keys {
                let extra: BTreeSet<Label> = map[&c]
                    .iter()
                    .filter_map(|a| map.get(a))
                    .flatten()
                    .copied()
                    .collect();
                let set = map.get_mut(&c).expect("key present");
                for a in extra {
                    changed |= set.insert(a);
                }
            }
            if !changed {
                return Below(map);
            }
        }
    }

    pub(crate) fn get(&self, n: Label) -> impl Iterator<Item = Label> + '_ {
        self.0.get(&n).into_iter().flatten().copied()
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.0
            .iter()
            .flat_map(|(&c, set)| set.iter().map(move |&a| (a, c)))
    }
}

// Rule classes in application order.
const CLOSURE: u8 = 0;
const DETERMINISTIC: u8 = 1;
const BRANCHING: u8 = 2;
const FRESH: u8 = 3;

struct Ctx<'a> {
    t: &'a Tableau,
    b: &'a Branch,
    below: Below,
}

impl Ctx<'_> {
    fn node(&self, f: FormulaId) -> &Node {
        self.t.arena.node(f)
    }

    fn neg(&self, f: FormulaId) -> FormulaId {
        self.t.arena.negation(f)
    }

    fn has(&self, n: Label, f: FormulaId) -> bool {
        self.b.has_sentence(n, f)
    }

    /// Membership decided by the skeleton alone.
    fn mem(&self, n: Label, e: ExprId) -> bool {
        if self.b.has_fact(n, e) {
            return true;
        }
        match *self.t.arena.expr(e) {
            ExprNode::Universal => true,
            ExprNode::Atom(_) | ExprNode::Complement(_) => false,
            ExprNode::Intersection(a, c) => self.mem(n, a) && self.mem(n, c),
            ExprNode::Union(a, c) => self.mem(n, a) || self.mem(n, c),
        }
    }

    fn in_domain(&self, n: Label, d: Domain) -> bool {
        match d {
            Domain::Standpoint(e) => self.mem(n, e),
            Domain::Formula(f) => self.has(n, f),
        }
    }

    fn is_min(&self, n: Label, e: ExprId) -> bool {
        self.b.min_facts.contains(&(n, Domain::Standpoint(e)))
    }

    /// Labels satisfying every positive atom of a conjunct.
    fn gamma(&self, positives: &[ExprId]) -> Vec<Label> {
        let universal = self.t.arena.universal();
        self.b
            .labels()
            .filter(|&n| {
                positives
                    .iter()
                    .all(|&p| p == universal || self.b.has_fact(n, p))
            })
            .collect()
    }

    fn min_witness_below(&self, n: Label, ok: impl Fn(Label) -> bool) -> bool {
        self.below.get(n).any(ok)
    }
}

impl Tableau {
    /// Every applicable rule instance, in application order. The
    /// nonempty-S rule is only listed when nothing else applies.
    pub fn applicable_rules(&self, b: &Branch) -> Vec<RuleInstance> {
        self.collect_rules(b, false)
    }

    pub(crate) fn first_rule(&self, b: &Branch) -> Option<RuleInstance> {
        self.collect_rules(b, true).into_iter().next()
    }

    fn collect_rules(&self, b: &Branch, first_only: bool) -> Vec<RuleInstance> {
        if b.closed {
            return Vec::new();
        }
        let ctx = Ctx {
            t: self,
            b,
            below: Below::of(b),
        };
        let mut out = Vec::new();
        for class in [CLOSURE, DETERMINISTIC, BRANCHING, FRESH] {
            ctx.rules_of_class(class, &mut out);
            if first_only && !out.is_empty() {
                out.truncate(1);
                return out;
            }
        }
        if out.is_empty() {
            if let Some(&(_, s)) = self
                .standpoints
                .iter()
                .find(|&&(_, s)| !b.skeleton.iter().any(|&(_, e)| e == s))
            {
                out.push(RuleInstance::NonEmpty { s });
            }
        }
        out
    }

    /// Alternatives of the rule's denominator, in the printed order.
    pub(crate) fn denominator(&self, b: &Branch, r: &RuleInstance) -> Vec<Vec<Addition>> {
        use Addition::*;
        let arena = &self.arena;
        let fresh = b.next_fresh;
        let bottom = arena.bottom();
        let neg = |f| arena.negation(f);
        let fresh_min = |e: ExprId| vec![Member(fresh, e), Min(fresh, Domain::Standpoint(e))];
        match *r {
            RuleInstance::Bottom { n, .. }
            | RuleInstance::BottomMinus { n, .. }
            | RuleInstance::BottomPrec { n, .. } => vec![vec![Sentence(n, bottom)]],
            RuleInstance::Neg { n, f } => match arena.node(f) {
                Node::Not(g) => match arena.node(*g) {
                    Node::Not(h) => vec![vec![Sentence(n, *h)]],
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            },
            RuleInstance::And { n, f } => match *arena.node(f) {
                Node::And(a, c) => vec![vec![Sentence(n, a), Sentence(n, c)]],
                _ => unreachable!(),
            },
            RuleInstance::Or { n, f } => match *arena.node(self.inner(f)) {
                Node::And(a, c) => vec![vec![Sentence(n, neg(a))], vec![Sentence(n, neg(c))]],
                _ => unreachable!(),
            },
            RuleInstance::Inter { n, e } => match *arena.expr(e) {
                ExprNode::Intersection(a, c) => vec![vec![Member(n, a), Member(n, c)]],
                _ => unreachable!(),
            },
            RuleInstance::Union { n, e } => match *arena.expr(e) {
                ExprNode::Union(a, c) => vec![vec![Member(n, a)], vec![Member(n, c)]],
                _ => unreachable!(),
            },
            RuleInstance::Star1 { n } | RuleInstance::Star2 { n } => {
                vec![vec![Member(n, arena.universal())]]
            }
            RuleInstance::Diamond { f, .. } => match *arena.node(self.inner(f)) {
                Node::Box(e, g) => vec![vec![Sentence(fresh, neg(g)), Member(fresh, e)]],
                _ => unreachable!(),
            },
            RuleInstance::BoxUnion { n, f } => {
                let (l, r) = self.split_box(f);
                vec![vec![Sentence(n, l), Sentence(n, r)]]
            }
            RuleInstance::BoxC { f, target, .. } => match *arena.node(f) {
                Node::Box(e, g) => {
                    let negated = arena.conjuncts(e)[0]
                        .negated_union
                        .expect("negative conjunct");
                    vec![vec![Member(target, negated)], vec![Sentence(target, g)]]
                }
                _ => unreachable!(),
            },
            RuleInstance::BoxCPlus { f, target, .. } => match *arena.node(f) {
                Node::Box(_, g) => vec![vec![Sentence(target, g)]],
                _ => unreachable!(),
            },
            RuleInstance::DPos { f, .. } => match *arena.node(self.inner(f)) {
                Node::DefBox(e, g) => {
                    let mut alt = vec![Sentence(fresh, neg(g))];
                    alt.extend(fresh_min(e));
                    vec![alt]
                }
                _ => unreachable!(),
            },
            RuleInstance::DefImplies { n, f } => match *arena.node(f) {
                Node::DefImplies(a, c) => vec![
                    vec![Sentence(n, neg(a))],
                    vec![
                        Sentence(fresh, a),
                        Prec(fresh, n),
                        Min(fresh, Domain::Formula(a)),
                    ],
                    vec![Sentence(n, c)],
                ],
                _ => unreachable!(),
            },
            RuleInstance::NotDefImplies { n, f } => match *arena.node(self.inner(f)) {
                Node::DefImplies(a, c) => {
                    vec![vec![
                        Sentence(n, a),
                        Sentence(n, neg(c)),
                        Min(n, Domain::Formula(a)),
                    ]]
                }
                _ => unreachable!(),
            },
            RuleInstance::MinBelow { domain, below, .. } => match domain {
                Domain::Standpoint(e) => vec![vec![Member(below, arena.complement_dnf(e))]],
                Domain::Formula(a) => vec![vec![Sentence(below, neg(a))]],
            },
            RuleInstance::Sharp {
                f,
                conjunct,
                target,
                ..
            }
            | RuleInstance::SharpPlus {
                f,
                conjunct,
                target,
                ..
            } => match *arena.node(f) {
                Node::DefSharpening(e, d) => {
                    let mut alts = Vec::new();
                    if let Some(negated) = arena.conjuncts(e)[conjunct].negated_union {
                        alts.push(vec![Member(target, negated)]);
                    }
                    alts.push(vec![Member(target, d)]);
                    let mut star = vec![Member(fresh, d), Prec(fresh, target)];
                    star.extend(fresh_min(e));
                    alts.push(star);
                    alts
                }
                _ => unreachable!(),
            },
            RuleInstance::NotSharp { f, .. } => match *arena.node(self.inner(f)) {
                Node::DefSharpening(e, d) => {
                    let mut alt = fresh_min(e);
                    alt.push(Member(fresh, arena.complement_dnf(d)));
                    vec![alt]
                }
                _ => unreachable!(),
            },
            RuleInstance::DefBox {
                f,
                conjunct,
                target,
                ..
            }
            | RuleInstance::DefBoxPlus {
                f,
                conjunct,
                target,
                ..
            } => match *arena.node(f) {
                Node::DefBox(e, g) => {
                    let mut alts = vec![vec![Sentence(target, g)]];
                    if let Some(negated) = arena.conjuncts(e)[conjunct].negated_union {
                        alts.push(vec![Member(target, negated)]);
                    }
                    let mut star = vec![Sentence(fresh, g), Prec(fresh, target)];
                    star.extend(fresh_min(e));
                    alts.push(star);
                    alts
                }
                _ => unreachable!(),
            },
            RuleInstance::NonEmpty { s } => vec![vec![Member(fresh, s)]],
        }
    }

    /// The formula under a negation.
    fn inner(&self, f: FormulaId) -> FormulaId {
        match *self.arena.node(f) {
            Node::Not(g) => g,
            _ => unreachable!("negated main sentence expected"),
        }
    }

    fn split_box(&self, f: FormulaId) -> (FormulaId, FormulaId) {
        let arena = &self.arena;
        let crate::syntax::Formula::Box(e, g) = arena.formula(f) else {
            unreachable!()
        };
        let crate::syntax::StandpointExpr::Union(l, r) = e else {
            unreachable!()
        };
        let find = |side: &crate::syntax::StandpointExpr| {
            arena
                .find_formula(&crate::syntax::Formula::boxed(side.clone(), (**g).clone()))
                .expect("split boxes are interned")
        };
        (find(l.as_ref()), find(r.as_ref()))
    }
}

/// True when the alternative introduces the fresh label.
pub(crate) fn uses_fresh(alt: &[Addition], fresh: Label) -> bool {
    alt.iter().any(|a| a.mentions(fresh))
}

impl Ctx<'_> {
    fn rules_of_class(&self, class: u8, out: &mut Vec<RuleInstance>) {
        match class {
            CLOSURE => self.closure_rules(out),
            DETERMINISTIC => self.deterministic_rules(out),
            BRANCHING => self.branching_rules(out),
            _ => self.fresh_rules(out),
        }
    }

    fn closure_rules(&self, out: &mut Vec<RuleInstance>) {
        for &(n, f) in &self.b.sentences {
            if let Node::Not(g) = *self.node(f) {
                if self.has(n, g) {
                    out.push(RuleInstance::Bottom { n, f: g });
                }
            }
        }
        for &(n, e) in &self.b.skeleton {
            if let ExprNode::Complement(x) = *self.t.arena.expr(e) {
                if self.b.has_fact(n, x) {
                    out.push(RuleInstance::BottomMinus { n, e });
                }
            }
        }
        for &(n, domain) in &self.b.min_facts {
            if let Some(below) = self.below.get(n).find(|&y| self.in_domain(y, domain)) {
                out.push(RuleInstance::BottomPrec { n, domain, below });
            }
        }
    }

    fn deterministic_rules(&self, out: &mut Vec<RuleInstance>) {
        let universal = self.t.arena.universal();
        for &(n, f) in &self.b.sentences {
            match *self.node(f) {
                Node::Not(g) => match *self.node(g) {
                    Node::Not(h) if !self.has(n, h) => out.push(RuleInstance::Neg { n, f }),
                    Node::DefImplies(a, c) => {
                        let neg_c = self.neg(c);
                        let done = self.has(n, a)
                            && self.has(n, neg_c)
                            && self.b.min_facts.contains(&(n, Domain::Formula(a)));
                        if !done {
                            out.push(RuleInstance::NotDefImplies { n, f });
                        }
                    }
                    _ => {}
                },
                Node::And(a, c) if !(self.has(n, a) && self.has(n, c)) => {
                    out.push(RuleInstance::And { n, f })
                }
                Node::Box(e, g) => match self.t.arena.expr(e) {
                    ExprNode::Union(..) => {
                        let (l, r) = self.t.split_box(f);
                        if !(self.has(n, l) && self.has(n, r)) {
                            out.push(RuleInstance::BoxUnion { n, f });
                        }
                    }
                    _ => {
                        for view in self.t.arena.conjuncts(e) {
                            if view.negated_union.is_some() {
                                continue;
                            }
                            for target in self.gamma(&view.positives) {
                                if !self.has(target, g) {
                                    out.push(RuleInstance::BoxCPlus { n, f, target });
                                }
                            }
                        }
                    }
                },
                _ => {}
            }
        }
        for &(n, e) in &self.b.skeleton {
            if let ExprNode::Intersection(a, c) = *self.t.arena.expr(e) {
                if !(self.b.has_fact(n, a) && self.b.has_fact(n, c)) {
                    out.push(RuleInstance::Inter { n, e });
                }
            }
        }
        let mut seen = BTreeSet::new();
        for &(n, _) in &self.b.sentences {
            if seen.insert(n) && !self.b.has_fact(n, universal) {
                out.push(RuleInstance::Star1 { n });
            }
        }
        for &(n, _) in &self.b.skeleton {
            if seen.insert(n) && !self.b.has_fact(n, universal) {
                out.push(RuleInstance::Star2 { n });
            }
        }
        for &(n, domain) in &self.b.min_facts {
            for below in self.below.get(n) {
                let present = match domain {
                    Domain::Standpoint(e) => self.b.has_fact(below, self.t.arena.complement_dnf(e)),
                    Domain::Formula(a) => self.has(below, self.neg(a)),
                };
                if !present {
                    out.push(RuleInstance::MinBelow { n, domain, below });
                }
            }
        }
    }

    fn branching_rules(&self, out: &mut Vec<RuleInstance>) {
        for &(n, f) in &self.b.sentences {
            match *self.node(f) {
                Node::Not(g) => {
                    if let Node::And(a, c) = *self.node(g) {
                        if !(self.has(n, self.neg(a)) || self.has(n, self.neg(c))) {
                            out.push(RuleInstance::Or { n, f });
                        }
                    }
                }
                Node::Box(e, g) => {
                    if let ExprNode::Union(..) = self.t.arena.expr(e) {
                        continue;
                    }
                    for view in self.t.arena.conjuncts(e) {
                        let Some(negated) = view.negated_union else {
                            continue;
                        };
                        for target in self.gamma(&view.positives) {
                            if !(self.mem(target, negated) || self.has(target, g)) {
                                out.push(RuleInstance::BoxC { n, f, target });
                            }
                        }
                    }
                }
                Node::DefImplies(a, c) => {
                    let done = self.has(n, self.neg(a))
                        || self.has(n, c)
                        || self.min_witness_below(n, |y| {
                            self.has(y, a) && self.b.min_facts.contains(&(y, Domain::Formula(a)))
                        });
                    if !done {
                        out.push(RuleInstance::DefImplies { n, f });
                    }
                }
                Node::DefSharpening(e, d) => {
                    for (conjunct, view) in self.t.arena.conjuncts(e).iter().enumerate() {
                        for target in self.gamma(&view.positives) {
                            let done = view.negated_union.is_some_and(|u| self.mem(target, u))
                                || self.mem(target, d)
                                || self.min_witness_below(target, |y| {
                                    self.mem(y, d) && self.mem(y, e) && self.is_min(y, e)
                                });
                            if done {
                                continue;
                            }
                            out.push(match view.negated_union {
                                Some(_) => RuleInstance::Sharp {
                                    n,
                                    f,
                                    conjunct,
                                    target,
                                },
                                None => RuleInstance::SharpPlus {
                                    n,
                                    f,
                                    conjunct,
                                    target,
                                },
                            });
                        }
                    }
                }
                Node::DefBox(e, g) => {
                    for (conjunct, view) in self.t.arena.conjuncts(e).iter().enumerate() {
                        for target in self.gamma(&view.positives) {
                            let done = self.has(target, g)
                                || view.negated_union.is_some_and(|u| self.mem(target, u))
                                || self.min_witness_below(target, |y| {
                                    self.has(y, g) && self.mem(y, e) && self.is_min(y, e)
                                });
                            if done {
                                continue;
                            }
                            out.push(match view.negated_union {
                                Some(_) => RuleInstance::DefBox {
                                    n,
                                    f,
                                    conjunct,
                                    target,
                                },
                                None => RuleInstance::DefBoxPlus {
                                    n,
                                    f,
                                    conjunct,
                                    target,
                                },
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        for &(n, e) in &self.b.skeleton {
            if let ExprNode::Union(a, c) = *self.t.arena.expr(e) {
                if !(self.mem(n, a) || self.mem(n, c)) {
                    out.push(RuleInstance::Union { n, e });
                }
            }
        }
    }

    fn fresh_rules(&self, out: &mut Vec<RuleInstance>) {
        for &(n, f) in &self.b.sentences {
            let Node::Not(g) = *self.node(f) else {
                continue;
            };
            match *self.node(g) {
                Node::Box(e, h) => {
                    let neg_h = self.neg(h);
                    if !self
                        .b
                        .labels()
                        .any(|y| self.has(y, neg_h) && self.mem(y, e))
                    {
                        out.push(RuleInstance::Diamond { n, f });
                    }
                }
                Node::DefBox(e, h) => {
                    let neg_h = self.neg(h);
                    let witnessed = self
                        .b
                        .labels()
                        .any(|y| self.has(y, neg_h) && self.mem(y, e) && self.is_min(y, e));
                    if !witnessed {
                        out.push(RuleInstance::DPos { n, f });
                    }
                }
                Node::DefSharpening(e, d) => {
                    let not_d = self.t.arena.complement_dnf(d);
                    let witnessed = self
                        .b
                        .labels()
                        .any(|y| self.mem(y, e) && self.mem(y, not_d) && self.is_min(y, e));
                    if !witnessed {
                        out.push(RuleInstance::NotSharp { n, f });
                    }
                }
                _ => {}
            }
        }
    }
}
