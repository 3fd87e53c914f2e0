//! Runs every acceptance criterion and prints one verdict line for each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    all_laws, converse_counterexample, figure_one, inf, parse, random_laws, violated_law, Gen,
};
use pdsl::reasoner::{cross_check_translation, preferential_entails, QueryOptions};
use pdsl::semantics::{
    enumerate_spss, oracle_local_sat, satisfies, satisfies_globally, validate_spss,
};
use pdsl::syntax::{
    parse_formula, print_formula, Formula, KnowledgeBase, StandpointExpr, VocabMode, Vocabulary,
};
use pdsl::tableau::{Limits, Tableau, Verdict};

type Outcome = Result<String, String>;

fn expect_all(checks: &[(String, bool, bool)]) -> Outcome {
    let wrong: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(what, got, want)| format!("{what}: got {got}, expected {want}"))
        .collect();
    if wrong.is_empty() {
        Ok(format!("{}/{} exact", checks.len(), checks.len()))
    } else {
        Err(wrong.join("; "))
    }
}

fn figure_one_fixture() -> Outcome {
    let start = Instant::now();
    let m = figure_one();
    validate_spss(&m).map_err(|v| format!("invalid structure: {v:?}"))?;
    let cases = [
        ("[[Vgt]]((egg | cheese) -> !animal)", true),
        ("<Vgt>(egg & animal)", true),
        ("[Vga]((egg | cheese) -> animal)", true),
        ("{Vga} <= {Vgt}", true),
        ("{Vgt} <~ {Pcf}", true),
        ("[[Vgt \\ Pcf]] false", false),
        ("<<Vga>>(egg -> animal)", true),
        ("{Env} <~ {Pcf}", false),
    ];
    let checks: Vec<_> = cases
        .iter()
        .map(|&(text, want)| {
            let got = satisfies_globally(&m, &parse(text)).map_err(|e| e.to_string());
            (text.to_string(), got == Ok(true), want)
        })
        .collect();
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    expect_all(&checks).map(|s| format!("{s} in {elapsed:?}"))
}

fn converse_fixture() -> Outcome {
    let m = converse_counterexample();
    validate_spss(&m).map_err(|v| format!("invalid structure: {v:?}"))?;
    let at = |w: usize, text: &str| satisfies(&m, w, &parse(text)).unwrap();
    let checks = vec![
        ("[[s]] p at pi1".to_string(), at(0, "[[s]] p"), true),
        ("[s] p at pi1".to_string(), at(0, "[s] p"), false),
        ("<s> q at pi1".to_string(), at(0, "<s> q"), true),
        ("<<s>> q at pi1".to_string(), at(0, "<<s>> q"), false),
        ("{s} <~ {t} at pi1".to_string(), at(0, "{s} <~ {t}"), true),
        ("{s} <= {t} at pi1".to_string(), at(0, "{s} <= {t}"), false),
        ("p ~> !q at pi3".to_string(), at(2, "p ~> !q"), true),
        (
            "p -> !q globally".to_string(),
            satisfies_globally(&m, &parse("p -> !q")).unwrap(),
            false,
        ),
    ];
    expect_all(&checks)
}

fn proposition_suites() -> Outcome {
    let start = Instant::now();
    let s = || StandpointExpr::atom("s");
    let t = || StandpointExpr::atom("t");
    let exprs = vec![
        s(),
        t(),
        StandpointExpr::Universal,
        StandpointExpr::complement(s()),
        StandpointExpr::intersection(s(), t()),
        StandpointExpr::difference(s(), t()),
    ];
    let formulas = vec![parse("p"), parse("!p"), Formula::Top, parse("false")];
    let laws = all_laws(&exprs, &formulas);
    let vocab = Vocabulary::new(["p"], ["s", "t"]).unwrap();
    let mut structures = 0usize;
    for m in enumerate_spss(&vocab, 3) {
        structures += 1;
        if let Some(v) = violated_law(&m, &laws) {
            return Err(format!("exhaustive: {v} in {:?}", m.to_spss()));
        }
    }
    let mut g = Gen::new(2024, &["p", "q", "r"], &["s", "t", "u"]);
    let random = 600;
    let mut instances = 0usize;
    for _ in 0..random {
        let m = g.structure(5);
        let laws: Vec<_> = (0..8).flat_map(|_| random_laws(&mut g, 3, 8)).collect();
        instances += laws.len();
        if let Some(v) = violated_law(&m.structure(), &laws) {
            return Err(format!("random: {v} in {}", m.to_json_string()));
        }
    }
    Ok(format!(
        "0 violations; {} law instances on {structures} enumerated structures, {instances} on {random} random structures, {:?}",
        laws.len(),
        start.elapsed()
    ))
}

fn tableau_corpus() -> Vec<Formula> {
    let mut out = Vec::new();
    for seed in 0..4 {
        let mut g = Gen::new(1000 + seed, &["p", "q"], &["s", "t"]);
        for budget in [4, 6, 8, 10] {
            for _ in 0..30 {
                out.push(inf(&g.formula(budget)));
            }
        }
    }
    out
}

struct TableauSummary {
    sat: usize,
    unsat: usize,
    deepest: usize,
    guard: usize,
    elapsed: Duration,
}

fn tableau_agreement(corpus: &[Formula]) -> Result<TableauSummary, String> {
    let vocab = Vocabulary::new(["p", "q"], ["s", "t"]).unwrap();
    let mut summary = TableauSummary {
        sat: 0,
        unsat: 0,
        deepest: 0,
        guard: usize::MAX,
        elapsed: Duration::ZERO,
    };
    let start = Instant::now();
    for f in corpus {
        let text = print_formula(f);
        let t = Tableau::new(f).map_err(|e| format!("{text}: {e}"))?;
        let limits = Limits::for_formula(f);
        let run = t.saturate(limits, None);
        if run.stats.max_depth > limits.max_depth {
            return Err(format!(
                "{text}: depth {} over guard {}",
                run.stats.max_depth, limits.max_depth
            ));
        }
        summary.deepest = summary.deepest.max(run.stats.max_depth);
        summary.guard = summary.guard.min(limits.max_depth);
        let found = oracle_local_sat(f, &vocab, 3).is_found();
        match run.verdict {
            Verdict::Sat(b) => {
                let m = t.extract_model(&b).map_err(|e| format!("{text}: {e}"))?;
                if validate_spss(&m).is_err() || satisfies(&m, 0, f) != Ok(true) {
                    return Err(format!("{text}: extracted model fails"));
                }
                summary.sat += 1;
            }
            Verdict::Unsat if found => {
                return Err(format!("{text}: UNSAT but the oracle found a model"))
            }
            Verdict::Unsat => summary.unsat += 1,
            Verdict::ResourceExceeded(e) => return Err(format!("{text}: {e}")),
        }
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}

fn entailment_pairs() -> Vec<(Vec<Formula>, Formula)> {
    let fixed = [
        (&["{s} <~ {t}", "[t] p"][..], "[[s]] p"),
        (&["[[s]] p"], "[s] p"),
        (&[], "true"),
        (&["p ~> q", "p"], "q"),
        (&["[s] p"], "[[s]] p"),
        (&["{s} <= {t}"], "{s} <~ {t}"),
        (&["<<s>> p"], "<s> p"),
        (&["{s} <~ {t}", "{s} <~ {-t}"], "false"),
    ];
    let mut out: Vec<_> = fixed
        .iter()
        .map(|(kb, q)| (kb.iter().map(|t| parse(t)).collect(), parse(q)))
        .collect();
    let mut g = Gen::new(77, &["p", "q"], &["s", "t"]);
    g.complex_indexes = false;
    for i in 0..60 {
        let kb = (0..1 + i % 2).map(|_| g.formula(4)).collect();
        out.push((kb, g.formula(4)));
    }
    out
}

fn entailment_agreement() -> Outcome {
    let vocab = Vocabulary::new(["p", "q"], ["s", "t"]).unwrap();
    let structures: Vec<_> = enumerate_spss(&vocab, 3).collect();
    let pairs = entailment_pairs();
    let (mut entailed, mut vacuous) = (0, 0);
    for (kb, q) in &pairs {
        let text = format!(
            "{{{}}} |= {}",
            kb.iter().map(print_formula).collect::<Vec<_>>().join(", "),
            print_formula(q)
        );
        let base = KnowledgeBase::from_formulas(kb.clone()).map_err(|e| format!("{text}: {e}"))?;
        let r = preferential_entails(&base, q, QueryOptions::default())
            .map_err(|e| format!("{text}: {e}"))?;
        let conj = base.conjunction();
        let semantic = structures.iter().all(|m| {
            let full = m.extension(&conj).unwrap();
            full.count_ones() as usize != m.worlds
                || m.extension(q).unwrap().count_ones() as usize == m.worlds
        });
        if r.entailed != semantic {
            return Err(format!(
                "{text}: reasoner {} but enumeration {semantic}",
                r.entailed
            ));
        }
        entailed += r.entailed as usize;
        vacuous += r.is_vacuous() as usize;
    }
    Ok(format!(
        "{} pairs agree ({entailed} entailed, {vacuous} vacuous) against {} structures",
        pairs.len(),
        structures.len()
    ))
}

fn translation_report() -> Outcome {
    let mut g = Gen::new(31, &["p", "q"], &["s", "t"]);
    g.conditionals = false;
    g.complex_indexes = false;
    let mut corpus = vec![
        parse("!({s} <~ {s})"),
        parse("[[s]] p & <s> !p"),
        parse("[s] p & ![[s]] p"),
    ];
    while corpus.len() < 120 {
        corpus.push(g.formula(6));
    }
    let report = cross_check_translation(&corpus, None);
    let text = report.to_string();
    if report.entries.len() != corpus.len() {
        return Err("report is missing entries".into());
    }
    for e in report.discrepancies() {
        let line = format!("DISCREPANCY: {}", print_formula(&e.formula));
        let Some(at) = text.find(&line) else {
            return Err(format!("{line} not itemized"));
        };
        let block: Vec<&str> = text[at..].lines().take(3).collect();
        if block.len() < 3
            || !block[1].starts_with("  original:")
            || !block[2].starts_with("  translated:")
        {
            return Err(format!("{line} lacks both witnesses"));
        }
    }
    let refl = report
        .entries
        .iter()
        .find(|e| print_formula(&e.formula) == "!{s} <~ {s}")
        .ok_or("reflexivity candidate missing")?;
    Ok(format!(
        "{} formulas, {} discrepancies itemized; reflexivity candidate {}",
        report.entries.len(),
        report.entries.len() - report.agreements(),
        if refl.agrees() { "agrees" } else { "flagged" }
    ))
}

fn parser_round_trip() -> Outcome {
    let mut g = Gen::new(8, &["p", "q", "r"], &["s", "t"]);
    let total = 1000;
    for i in 0..total {
        let f = g.formula(2 + i % 24);
        let text = print_formula(&f);
        let back = parse_formula(&text, VocabMode::Inferred).map(|(f, _)| f);
        if back.as_ref() != Ok(&f) {
            return Err(format!("{text}: {back:?}"));
        }
    }
    Ok(format!("{total}/{total} identical"))
}

fn report(n: usize, name: &str, outcome: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(outcome)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let (verdict, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!(
        "criterion {n} [{name}]: {verdict} | {detail} ({:.2?})",
        start.elapsed()
    );
    result.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "figure-1 fixture", figure_one_fixture);
    ok &= report(2, "converse counterexamples", converse_fixture);
    ok &= report(3, "proposition suites", proposition_suites);
    let corpus = tableau_corpus();
    let summary =
        catch_unwind(|| tableau_agreement(&corpus)).unwrap_or_else(|_| Err("panicked".into()));
    ok &= report(4, "tableau and oracle agree", || {
        summary
            .as_ref()
            .map(|s| format!(
                    "{} formulas, {} sat (all models verified), {} unsat, 0 disagreements in {:.2?}",
                    corpus.len(),
                    s.sat,
                    s.unsat,
                    s.elapsed
                ))
            .map_err(Clone::clone)
    });
    ok &= report(5, "entailment reduction", entailment_agreement);
    ok &= report(6, "depth discipline", || {
        summary
            .as_ref()
            .map(|s| {
                format!(
                    "deepest branch {}, every run within its guard (smallest guard {}), no limit tripped",
                    s.deepest, s.guard
                )
            })
            .map_err(Clone::clone)
    });
    ok &= report(7, "translation report", translation_report);
    ok &= report(8, "parser round trip", parser_round_trip);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
