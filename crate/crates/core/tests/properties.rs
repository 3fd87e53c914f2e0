mod common;

use common::{inf, parse, Gen};
use pdsl::normalize::{dnf_expr, is_inf, to_dnf, to_inf};
use pdsl::reasoner::{
    global_sat, local_sat, preferential_entails, translate_restricted, FragmentMode, QueryOptions,
};
use pdsl::semantics::{enumerate_spss, satisfies, satisfies_globally, validate_spss};
use pdsl::syntax::{
    expand_derived, formula_size, parse_formula, print_formula, Formula, KnowledgeBase,
    StandpointExpr, VocabMode, Vocabulary,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn generator(seed: u64) -> Gen {
    Gen::new(seed, &["p", "q"], &["s", "t"])
}

/// Every expression over `s`, `t` and `*` with exactly `size` symbols.
fn expressions_of_size(size: usize, memo: &mut Vec<Vec<StandpointExpr>>) -> Vec<StandpointExpr> {
    while memo.len() <= size {
        let n = memo.len();
        let mut out = Vec::new();
        if n == 1 {
            out = vec![
                StandpointExpr::atom("s"),
                StandpointExpr::atom("t"),
                StandpointExpr::Universal,
            ];
        } else if n > 1 {
            out.extend(memo[n - 1].iter().cloned().map(StandpointExpr::complement));
            for left in 1..n - 1 {
                for a in &memo[left] {
                    for b in &memo[n - 1 - left] {
                        out.push(StandpointExpr::intersection(a.clone(), b.clone()));
                        out.push(StandpointExpr::union(a.clone(), b.clone()));
                        out.push(StandpointExpr::difference(a.clone(), b.clone()));
                    }
                }
            }
        }
        memo.push(out);
    }
    memo[size].clone()
}

fn contains_defeasible(f: &Formula) -> bool {
    match f {
        Formula::DefBox(..)
        | Formula::DefDiamond(..)
        | Formula::DefSharpening(..)
        | Formula::DefImplies(..) => true,
        Formula::Top | Formula::Bottom | Formula::Atom(_) | Formula::Sharpening(..) => false,
        Formula::Not(a) | Formula::Box(_, a) | Formula::Diamond(_, a) => contains_defeasible(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            contains_defeasible(a) || contains_defeasible(b)
        }
    }
}

fn subformulas(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Not(a)
        | Formula::Box(_, a)
        | Formula::Diamond(_, a)
        | Formula::DefBox(_, a)
        | Formula::DefDiamond(_, a) => {
            vec![a]
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b)
        | Formula::DefImplies(a, b) => vec![a, b],
        _ => vec![],
    }
}

#[test]
fn dnf_preserves_sigma_exhaustively() {
    let vocab = Vocabulary::new([] as [&str; 0], ["s", "t"]).unwrap();
    let structures: Vec<_> = enumerate_spss(&vocab, 3).collect();
    let mut memo = Vec::new();
    let mut checked = 0;
    for size in 1..=6 {
        for e in expressions_of_size(size, &mut memo) {
            let d = dnf_expr(&e);
            for m in &structures {
                assert_eq!(m.sigma_of(&e), m.sigma_of(&d), "{e} vs {d}");
            }
            checked += 1;
        }
    }
    // 3 + 3 + 30 + 84 + 651 + 2703
    assert_eq!(checked, 3474);
}

#[test]
fn universe_size_of_the_exhaustive_checks() {
    let vocab = Vocabulary::new(["p"], ["s", "t"]).unwrap();
    assert_eq!(enumerate_spss(&vocab, 3).count(), 2 + 108 + 7448);
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), budget in 1usize..30) {
        let f = generator(seed).formula(budget);
        let text = print_formula(&f);
        let back = parse_formula(&text, VocabMode::Inferred).map(|(g, _)| g);
        prop_assert_eq!(back, Ok(f), "{}", text);
    }

    #[test]
    fn expansion_is_idempotent(seed in any::<u64>(), budget in 1usize..20) {
        let once = expand_derived(&generator(seed).formula(budget));
        prop_assert_eq!(expand_derived(&once), once);
    }

    #[test]
    fn dnf_is_idempotent(seed in any::<u64>(), budget in 1usize..8) {
        let e = generator(seed).expr(budget);
        if let Ok(d) = to_dnf(&e) {
            prop_assert_eq!(to_dnf(&d.to_expr()), Ok(d));
        }
    }

    #[test]
    fn size_grows_with_subformulas(seed in any::<u64>(), budget in 1usize..20) {
        let f = generator(seed).formula(budget);
        for sub in subformulas(&f) {
            prop_assert!(formula_size(sub) < formula_size(&f));
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn expansion_and_normalization_preserve_truth(seed in any::<u64>(), budget in 1usize..11) {
        let mut g = generator(seed);
        let f = g.formula(budget);
        let core = expand_derived(&f);
        let normal = to_inf(&core);
        prop_assert!(is_inf(&normal));
        for _ in 0..8 {
            let m = g.structure(4);
            for w in 0..m.len() {
                let truth = satisfies(&m, w, &f);
                prop_assert_eq!(&satisfies(&m, w, &core), &truth, "{}", print_formula(&f));
                prop_assert_eq!(&satisfies(&m, w, &normal), &truth, "{}", print_formula(&f));
            }
        }
    }

    #[test]
    fn reasoner_models_are_verified(seed in any::<u64>(), budget in 1usize..9) {
        let f = generator(seed).formula(budget);
        if let Some(m) = local_sat(&f, QueryOptions::default()).unwrap().model {
            prop_assert!(validate_spss(&m).is_ok());
            prop_assert_eq!(satisfies(&m, 0, &f), Ok(true));
        }
        if let Some(m) = global_sat(&f, QueryOptions::default()).unwrap().model {
            prop_assert_eq!(satisfies_globally(&m, &f), Ok(true));
        }
    }

    #[test]
    fn translation_removes_defeasible_constructs(seed in any::<u64>(), budget in 1usize..12) {
        let mut g = generator(seed);
        g.conditionals = false;
        let f = g.formula(budget);
        let t = translate_restricted(&f, FragmentMode::Permissive).unwrap();
        prop_assert!(!contains_defeasible(&t.formula), "{}", print_formula(&t.formula));
        g.complex_indexes = false;
        let atomic = g.formula(budget);
        let strict = translate_restricted(&atomic, FragmentMode::Strict).unwrap();
        prop_assert!(!contains_defeasible(&strict.formula));
    }

    #[test]
    fn entailment_is_monotonic(seed in any::<u64>()) {
        let mut g = generator(seed);
        g.complex_indexes = false;
        let kb = vec![g.formula(4)];
        let query = g.formula(4);
        let extra = g.formula(3);
        let base = KnowledgeBase::from_formulas(kb.clone()).unwrap();
        let r = preferential_entails(&base, &query, QueryOptions::default()).unwrap();
        if r.entailed {
            let bigger = KnowledgeBase::from_formulas(vec![kb[0].clone(), extra]).unwrap();
            let r2 = preferential_entails(&bigger, &query, QueryOptions::default()).unwrap();
            prop_assert!(r2.entailed);
        }
    }
}

#[test]
fn countermodels_witness_non_entailment() {
    let kb = KnowledgeBase::from_formulas(vec![parse("[[s]] p")]).unwrap();
    let r = preferential_entails(&kb, &parse("[s] p"), QueryOptions::default()).unwrap();
    let m = r.countermodel.expect("not entailed");
    assert_eq!(satisfies_globally(&m, &parse("[[s]] p")), Ok(true));
    assert_eq!(satisfies(&m, 0, &parse("[s] p")), Ok(false));
}

#[test]
fn inf_of_generated_formulas_is_inf() {
    let mut g = generator(5);
    for _ in 0..200 {
        assert!(is_inf(&inf(&g.formula(10))));
    }
}
