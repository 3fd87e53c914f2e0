mod common;

use std::path::{Path, PathBuf};

use pdsl::cli::run;
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn verdict(&self) -> String {
        self.json()["verdict"].as_str().unwrap().to_string()
    }
}

fn pdsl(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("pdsl").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sat_reports_verdicts_and_verifiable_models() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "fig1_dbox.pdsl", "[[s]]p & <s>!p\n");
    let out_model = dir.path().join("model.json");
    let r = pdsl(&["sat", s(&q), "--model", s(&out_model)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["verdict"], "sat");
    assert!(doc["model"].is_object());
    assert!(doc["stats"]["steps"].as_u64().unwrap() > 0);
    let world = doc["world"].as_str().unwrap();
    let check = pdsl(&[
        "check-model",
        "--model",
        s(&out_model),
        "--formula",
        "[[s]]p & <s>!p",
        "--at",
        world,
    ]);
    assert_eq!(check.verdict(), "true");

    for (name, text) in [
        ("contradiction.pdsl", "p & !p"),
        ("refl.pdsl", "!({s} <~ {s})"),
    ] {
        let r = pdsl(&["sat", s(&file(&dir, name, text))]);
        assert_eq!(r.code, 0);
        assert_eq!(r.verdict(), "unsat");
        assert!(r.json().get("model").is_none());
    }
}

#[test]
fn global_flag_decides_global_satisfiability() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "q.pdsl", "p & <*> !p\n");
    assert_eq!(pdsl(&["sat", s(&q)]).verdict(), "sat");
    assert_eq!(pdsl(&["sat", "--global", s(&q)]).verdict(), "unsat");
}

#[test]
fn entail_matches_the_reduction_examples() {
    let dir = TempDir::new().unwrap();
    let kb = file(&dir, "kb.pdsl", "{s} <~ {t}\n[t] p\n");
    let q = file(&dir, "q.pdsl", "[[s]] p\n");
    assert_eq!(
        pdsl(&["entail", "--kb", s(&kb), "--query", s(&q)]).verdict(),
        "entailed"
    );

    let kb = file(&dir, "kb2.pdsl", "[[s]] p\n");
    let q = file(&dir, "q2.pdsl", "[s] p\n");
    let r = pdsl(&["entail", "--kb", s(&kb), "--query", s(&q)]);
    assert_eq!(r.verdict(), "not-entailed");
    assert!(r.json()["model"].is_object());

    let empty = file(&dir, "empty.pdsl", "# nothing\n");
    let top = file(&dir, "top.pdsl", "true\n");
    assert_eq!(
        pdsl(&["entail", "--kb", s(&empty), "--query", s(&top)]).verdict(),
        "entailed"
    );

    let bad_kb = file(&dir, "bad.pdsl", "p\n!p\n");
    let r = pdsl(&["entail", "--kb", s(&bad_kb), "--query", s(&q)]);
    assert_eq!(r.verdict(), "entailed");
    assert!(!r.json()["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn check_model_on_the_vegetarian_structure() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "fig1.json", &common::figure_one().to_json_string());
    let check = |f: &str| pdsl(&["check-model", "--model", s(&m), "--formula", f]).verdict();
    assert_eq!(check("{Vgt} <~ {Pcf}"), "true");
    assert_eq!(check("{Env} <~ {Pcf}"), "false");
    assert_eq!(check("true"), "true");

    let broken = file(
        &dir,
        "broken.json",
        r#"{"precisifications": ["a"], "sigma": {"s": []}, "gamma": {"a": []}, "prec": [["a", "a"]]}"#,
    );
    let r = pdsl(&["check-model", "--model", s(&broken), "--formula", "true"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("empty standpoint s"), "{}", r.stderr);
}

#[test]
fn oracle_and_translate() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "q.pdsl", "[[s]]p & <s>!p\n");
    let r = pdsl(&["oracle", s(&q), "--max-worlds", "2"]);
    assert_eq!(r.verdict(), "found");
    assert_eq!(
        pdsl(&["oracle", s(&q), "--max-worlds", "1"]).verdict(),
        "not-found"
    );

    let t = pdsl(&["translate", s(&file(&dir, "t.pdsl", "[[s]] p\n"))]);
    assert_eq!((t.code, t.stdout.trim()), (0, "[s~] p"));

    let c = pdsl(&["translate", s(&file(&dir, "c.pdsl", "p ~> q\n"))]);
    assert_eq!(c.code, 3);
    assert!(c.stderr.contains("contains ⇝"), "{}", c.stderr);
}

#[test]
fn exit_codes_separate_input_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let r = pdsl(&["sat", s(&file(&dir, "bad.pdsl", "p &\n"))]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);

    let two = file(&dir, "two.pdsl", "p\nq\n");
    assert_eq!(pdsl(&["sat", s(&two)]).code, 4);

    let undeclared = file(&dir, "decl.pdsl", "#atoms: p\n#standpoints: s\n[t] p\n");
    assert_eq!(pdsl(&["sat", s(&undeclared)]).code, 4);

    assert_eq!(pdsl(&["sat"]).code, 3);
    assert_eq!(pdsl(&["frobnicate"]).code, 3);
    assert_eq!(pdsl(&["sat", "/definitely/missing.pdsl"]).code, 3);
}

#[test]
fn limits_and_traces() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "q.pdsl", "[[s]]p & <s>!p & (p ~> q)\n");
    let r = pdsl(&["sat", s(&q), "--max-steps", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.verdict(), "resource-exceeded");

    let traced = pdsl(&["sat", s(&q), "--trace"]);
    assert!(traced
        .stderr
        .lines()
        .next()
        .unwrap()
        .starts_with("STEP 1 | RULE "));
    assert_eq!(traced.stdout, pdsl(&["sat", s(&q)]).stdout);
}

#[test]
fn identical_inputs_give_identical_documents() {
    let dir = TempDir::new().unwrap();
    let mut g = common::Gen::new(3, &["p", "q"], &["s", "t"]);
    for i in 0..20 {
        let text = pdsl::syntax::print_formula(&g.formula(8));
        let q = file(&dir, &format!("q{i}.pdsl"), &text);
        let (a, b) = (pdsl(&["sat", s(&q)]), pdsl(&["sat", s(&q)]));
        assert_eq!(a.stdout, b.stdout, "{text}");
        if a.verdict() == "sat" {
            let m = file(&dir, &format!("m{i}.json"), &a.json()["model"].to_string());
            let world = a.json()["world"].as_str().unwrap().to_string();
            let check = pdsl(&[
                "check-model",
                "--model",
                s(&m),
                "--formula",
                &text,
                "--at",
                &world,
            ]);
            assert_eq!(check.verdict(), "true", "{text}");
        }
    }
}
