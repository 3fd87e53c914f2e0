//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::reasoner::{
    global_sat, local_sat, preferential_entails, translate_restricted, FragmentMode, QueryOptions,
    ReasonerError, SatResult,
};
use crate::semantics::{
    oracle_local_sat_with, satisfies, satisfies_globally, EnumOptions, OracleResult, Spss,
    SpssJson, MAX_ENUM_WORLDS,
};
use crate::syntax::{
    parse_formula, print_formula, vocabulary_of, Formula, KnowledgeBase, VocabMode, Vocabulary,
};
use crate::tableau::{Limits, Stats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pdsl",
    version,
    about = "Reasoner for defeasible standpoint logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct LimitArgs {
    /// Longest branch explored (default scales with the formula)
    #[arg(long)]
    max_depth: Option<usize>,
    /// Rule applications before giving up (default 1000000)
    #[arg(long)]
    max_steps: Option<usize>,
    /// Labels per branch (default scales with the formula)
    #[arg(long)]
    max_labels: Option<usize>,
    /// Write the tableau trace to standard error
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide local (or global) satisfiability of the formula in FILE
    Sat {
        file: PathBuf,
        #[arg(long)]
        global: bool,
        /// Also write the model JSON to this file
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Decide whether the knowledge base preferentially entails the query
    Entail {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Also write the countermodel JSON to this file
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Evaluate a formula in a model, at one precisification or globally
    CheckModel {
        #[arg(long)]
        model: PathBuf,
        /// Formula text
        #[arg(long)]
        formula: String,
        /// Precisification name
        #[arg(long)]
        at: Option<String>,
    },
    /// Search all small structures for a model of the formula in FILE
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
    /// Translate the defeasible formulas in FILE into classical standpoint logic
    Translate {
        file: PathBuf,
        /// Accept complex indexes
        #[arg(long)]
        permissive: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StatsJson {
    pub steps: usize,
    pub labels: usize,
    pub max_depth: usize,
}

impl From<Stats> for StatsJson {
    fn from(s: Stats) -> Self {
        StatsJson {
            steps: s.steps,
            labels: s.labels,
            max_depth: s.max_depth,
        }
    }
}

/// The JSON document printed by every query command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<SpssJson>,
    /// Precisification of the model the witness is about.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub world: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
    pub warnings: Vec<String>,
}

impl ResultDocument {
    fn new(verdict: &str) -> Self {
        ResultDocument {
            verdict: verdict.to_string(),
            model: None,
            world: None,
            stats: None,
            warnings: Vec::new(),
        }
    }
}

/// A failed command: message for standard error and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

enum Output {
    Document(ResultDocument),
    Text(String),
}

/// A parsed `.pdsl` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryFile {
    /// Set when the file declares `#standpoints:` or `#atoms:`.
    pub declared: Option<Vocabulary>,
    pub formulas: Vec<Formula>,
}

impl QueryFile {
    pub fn vocabulary(&self) -> Vocabulary {
        self.declared.clone().unwrap_or_default()
    }
}

/// Parses `.pdsl` text: optional `#standpoints:` / `#atoms:` headers, one
/// formula per line, `#` starts a comment. Once either header appears the
/// vocabulary is closed and undeclared names are errors.
pub fn parse_query_file(text: &str) -> Result<QueryFile, String> {
    let mut atoms: Option<BTreeSet<String>> = None;
    let mut standpoints: Option<BTreeSet<String>> = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix("#standpoints:") {
            standpoints
                .get_or_insert_with(BTreeSet::new)
                .extend(rest.split_whitespace().map(String::from));
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#atoms:") {
            atoms
                .get_or_insert_with(BTreeSet::new)
                .extend(rest.split_whitespace().map(String::from));
            continue;
        }
        let body = raw.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            lines.push((i + 1, body));
        }
    }
    let declared = if atoms.is_some() || standpoints.is_some() {
        let v = Vocabulary::new(atoms.unwrap_or_default(), standpoints.unwrap_or_default())
            .map_err(|e| format!("header: {e}"))?;
        Some(v)
    } else {
        None
    };
    let mut formulas = Vec::new();
    for (line, body) in lines {
        let mode = match &declared {
            Some(v) => VocabMode::Declared(v),
            None => VocabMode::Inferred,
        };
        let (f, _) = parse_formula(body, mode).map_err(|e| format!("line {line}: {e}"))?;
        formulas.push(f);
    }
    Ok(QueryFile { declared, formulas })
}

fn read_query_file(path: &Path) -> Result<QueryFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_query_file(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn single_formula(path: &Path) -> Result<(Formula, Vocabulary), Failure> {
    let file = read_query_file(path)?;
    match file.formulas.as_slice() {
        [f] => Ok((f.clone(), file.vocabulary())),
        other => Err(Failure::input(format!(
            "{}: expected exactly one formula, found {}",
            path.display(),
            other.len()
        ))),
    }
}

fn limits_for(args: &LimitArgs, f: &Formula) -> Limits {
    let mut limits = Limits::for_formula(f);
    if let Some(d) = args.max_depth {
        limits.max_depth = d;
    }
    if let Some(s) = args.max_steps {
        limits.max_steps = s;
    }
    if let Some(l) = args.max_labels {
        limits.max_labels = l;
    }
    limits
}

fn write_model(path: Option<&PathBuf>, model: &Spss) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, model.to_json_string() + "\n")
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn reasoner_failure(e: ReasonerError) -> Result<ResultDocument, Failure> {
    match e {
        ReasonerError::ResourceExceeded(r) => {
            let mut doc = ResultDocument::new("resource-exceeded");
            doc.stats = Some(r.stats.into());
            doc.warnings.push(r.to_string());
            Ok(doc)
        }
        ReasonerError::InternalSoundness(m) => Err(Failure {
            code: 1,
            message: m,
        }),
    }
}

fn sat_document(result: SatResult) -> ResultDocument {
    let mut doc = ResultDocument::new(if result.is_sat() { "sat" } else { "unsat" });
    doc.stats = Some(result.stats.into());
    if let Some(m) = &result.model {
        doc.world = Some(m.name(0).to_string());
        doc.model = Some(m.to_json());
    }
    doc
}

fn cmd_sat(
    file: &Path,
    global: bool,
    model: Option<&PathBuf>,
    args: &LimitArgs,
    stderr: &mut dyn Write,
) -> Result<ResultDocument, Failure> {
    let (f, vocab) = single_formula(file)?;
    let probe = if global {
        Formula::boxed(crate::syntax::StandpointExpr::Universal, f.clone())
    } else {
        f.clone()
    };
    let opts = QueryOptions {
        limits: Some(limits_for(args, &probe)),
        standpoints: vocab.standpoints,
        trace: if args.trace { Some(stderr) } else { None },
    };
    let result = if global {
        global_sat(&f, opts)
    } else {
        local_sat(&f, opts)
    };
    match result {
        Ok(r) => {
            if let Some(m) = &r.model {
                write_model(model, m)?;
            }
            let mut doc = sat_document(r);
            if global {
                doc.world = None;
            }
            Ok(doc)
        }
        Err(e) => reasoner_failure(e),
    }
}

fn cmd_entail(
    kb_path: &Path,
    query_path: &Path,
    model: Option<&PathBuf>,
    args: &LimitArgs,
    stderr: &mut dyn Write,
) -> Result<ResultDocument, Failure> {
    let kb_file = read_query_file(kb_path)?;
    let (query, query_vocab) = single_formula(query_path)?;
    let merged = [kb_file.vocabulary(), query_vocab]
        .into_iter()
        .chain(kb_file.formulas.iter().map(vocabulary_of))
        .chain([vocabulary_of(&query)])
        .try_fold(Vocabulary::default(), |acc, v| acc.merge(&v))
        .map_err(|e| Failure::input(format!("vocabulary: {e}")))?;
    let kb = KnowledgeBase::new(merged, kb_file.formulas)
        .map_err(|e| Failure::input(format!("{}: {e}", kb_path.display())))?;
    let probe = Formula::and(
        Formula::boxed(crate::syntax::StandpointExpr::Universal, kb.conjunction()),
        Formula::not(query.clone()),
    );
    let opts = QueryOptions {
        limits: Some(limits_for(args, &probe)),
        standpoints: BTreeSet::new(),
        trace: if args.trace { Some(stderr) } else { None },
    };
    match preferential_entails(&kb, &query, opts) {
        Ok(r) => {
            let mut doc = ResultDocument::new(if r.entailed {
                "entailed"
            } else {
                "not-entailed"
            });
            doc.stats = Some(r.stats.into());
            if r.is_vacuous() {
                doc.warnings.push(
                    "knowledge base is not globally satisfiable; entailment is vacuous".into(),
                );
            }
            if let Some(m) = &r.countermodel {
                write_model(model, m)?;
                doc.world = Some(m.name(0).to_string());
                doc.model = Some(m.to_json());
            }
            Ok(doc)
        }
        Err(e) => reasoner_failure(e),
    }
}

fn cmd_check_model(
    path: &Path,
    formula: &str,
    at: Option<&str>,
) -> Result<ResultDocument, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let model = Spss::from_json_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let (f, _) = parse_formula(formula, VocabMode::Inferred)
        .map_err(|e| Failure::input(format!("--formula: {e}")))?;
    let value = match at {
        Some(name) => {
            let world = model
                .index_of(name)
                .ok_or_else(|| Failure::input(format!("unknown precisification `{name}`")))?;
            satisfies(&model, world, &f)
        }
        None => satisfies_globally(&model, &f),
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    let mut doc = ResultDocument::new(if value { "true" } else { "false" });
    doc.world = at.map(String::from);
    Ok(doc)
}

fn cmd_oracle(file: &Path, max_worlds: usize) -> Result<ResultDocument, Failure> {
    if !(1..=MAX_ENUM_WORLDS).contains(&max_worlds) {
        return Err(Failure::usage(format!(
            "--max-worlds must be between 1 and {MAX_ENUM_WORLDS}"
        )));
    }
    let (f, vocab) = single_formula(file)?;
    let result = oracle_local_sat_with(&f, &vocab, EnumOptions::up_to(max_worlds));
    Ok(match result {
        OracleResult::Found { model, world } => {
            let mut doc = ResultDocument::new("found");
            doc.world = Some(model.name(world).to_string());
            doc.model = Some(model.to_json());
            doc
        }
        OracleResult::NotFound => {
            let mut doc = ResultDocument::new("not-found");
            doc.warnings.push(format!(
                "no model with at most {max_worlds} precisifications; larger models are not excluded"
            ));
            doc
        }
    })
}

fn cmd_translate(file: &Path, permissive: bool, stderr: &mut dyn Write) -> Result<String, Failure> {
    let parsed = read_query_file(file)?;
    let mode = if permissive {
        FragmentMode::Permissive
    } else {
        FragmentMode::Strict
    };
    let mut out = String::new();
    for f in &parsed.formulas {
        let t = translate_restricted(f, mode).map_err(|e| Failure::usage(e.to_string()))?;
        for w in &t.warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
        out.push_str(&print_formula(&t.formula));
        out.push('\n');
    }
    Ok(out)
}

fn dispatch(cli: Cli, stderr: &mut dyn Write) -> Result<Output, Failure> {
    Ok(match cli.command {
        Command::Sat {
            file,
            global,
            model,
            limits,
        } => Output::Document(cmd_sat(&file, global, model.as_ref(), &limits, stderr)?),
        Command::Entail {
            kb,
            query,
            model,
            limits,
        } => Output::Document(cmd_entail(&kb, &query, model.as_ref(), &limits, stderr)?),
        Command::CheckModel { model, formula, at } => {
            Output::Document(cmd_check_model(&model, &formula, at.as_deref())?)
        }
        Command::Oracle { file, max_worlds } => Output::Document(cmd_oracle(&file, max_worlds)?),
        Command::Translate { file, permissive } => {
            Output::Text(cmd_translate(&file, permissive, stderr)?)
        }
    })
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 when the query completed, whatever the verdict; 3 for usage
/// errors and formulas outside the translatable fragment; 4 for malformed
/// input files, formulas and models.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stderr) {
        Ok(Output::Document(doc)) => {
            let json = serde_json::to_string_pretty(&doc).expect("document serializes");
            let _ = writeln!(stdout, "{json}");
            EXIT_OK
        }
        Ok(Output::Text(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_declare_the_vocabulary() {
        let q = parse_query_file("#standpoints: s t\n#atoms: p\n[[s]] p # typical\n\n").unwrap();
        let v = q.declared.unwrap();
        assert_eq!(v.standpoints.len(), 2);
        assert_eq!(q.formulas.len(), 1);
        assert!(parse_query_file("#atoms: p\nq\n")
            .unwrap_err()
            .starts_with("line 2:"));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let q = parse_query_file("# a comment\n\np\n  # another\nq & r\n").unwrap();
        assert!(q.declared.is_none());
        assert_eq!(q.formulas.len(), 2);
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        let err = parse_query_file("p\np &\n").unwrap_err();
        assert!(err.starts_with("line 2: parse error at position"), "{err}");
    }
}
