use super::{Formula, StandpointExpr};

/// Rewrites derived connectives and standpoint operators into the primitive
/// core. Core formulas are returned unchanged.
pub fn expand_derived(f: &Formula) -> Formula {
    match f {
        Formula::Top => Formula::Top,
        Formula::Bottom => Formula::not(Formula::Top),
        Formula::Atom(p) => Formula::Atom(p.clone()),
        Formula::Not(g) => Formula::not(expand_derived(g)),
        Formula::And(a, b) => Formula::and(expand_derived(a), expand_derived(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(
            Formula::not(expand_derived(a)),
            Formula::not(expand_derived(b)),
        )),
        Formula::Implies(a, b) => implication(expand_derived(a), expand_derived(b)),
        Formula::Iff(a, b) => {
            let (a, b) = (expand_derived(a), expand_derived(b));
            Formula::and(implication(a.clone(), b.clone()), implication(b, a))
        }
        Formula::Box(e, g) => Formula::boxed(expand_expr(e), expand_derived(g)),
        Formula::Diamond(e, g) => Formula::not(Formula::boxed(
            expand_expr(e),
            Formula::not(expand_derived(g)),
        )),
        Formula::DefBox(e, g) => Formula::def_box(expand_expr(e), expand_derived(g)),
        Formula::DefDiamond(e, g) => Formula::not(Formula::def_box(
            expand_expr(e),
            Formula::not(expand_derived(g)),
        )),
        Formula::DefImplies(a, b) => Formula::def_implies(expand_derived(a), expand_derived(b)),
        Formula::Sharpening(e, d) => Formula::boxed(
            StandpointExpr::intersection(
                expand_expr(e),
                StandpointExpr::complement(expand_expr(d)),
            ),
            Formula::not(Formula::Top),
        ),
        Formula::DefSharpening(e, d) => Formula::DefSharpening(expand_expr(e), expand_expr(d)),
    }
}

fn implication(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::and(a, Formula::not(b)))
}

/// Eliminates union and difference.
pub(crate) fn expand_expr(e: &StandpointExpr) -> StandpointExpr {
    use StandpointExpr as E;
    match e {
        E::Universal => E::Universal,
        E::Atom(s) => E::Atom(s.clone()),
        E::Complement(inner) => E::complement(expand_expr(inner)),
        E::Intersection(a, b) => E::intersection(expand_expr(a), expand_expr(b)),
        E::Union(a, b) => E::complement(E::intersection(
            E::complement(expand_expr(a)),
            E::complement(expand_expr(b)),
        )),
        E::Difference(a, b) => E::intersection(expand_expr(a), E::complement(expand_expr(b))),
    }
}
