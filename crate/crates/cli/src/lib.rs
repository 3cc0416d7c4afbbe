//! File formats, reports and commands behind the `legsurg` binary.
//!
//! Every command returns an [`Output`] instead of printing, so tests can
//! drive them without spawning a process.

pub mod fixtures;
pub mod presentation;
pub mod report;
pub mod table_file;

use std::path::{Path, PathBuf};

use legsurg_core::classify::{classify_with, ClassifyError, ClassifyOptions, Level, RuleId};
use num_bigint::BigInt;
use serde::Serialize;

use fixtures::Source;
use presentation::{is_presentation, load_presentation, parse_front, read_file, PresentationFile};

/// Process exit codes.
pub mod exit {
    use legsurg_core::classify::Level;

    pub const OK: i32 = 0;
    /// `examples` found a fixture whose outcome differs from the record.
    pub const MISMATCH: i32 = 1;
    /// Unreadable or invalid input, including declared values that
    /// contradict the computation.
    pub const INPUT: i32 = 2;
    /// A Stein-fillability rule and a vanishing rule fired together.
    pub const INCONSISTENT: i32 = 3;
    pub const C_PLUS_VANISHES: i32 = 10;
    pub const C_VANISHES: i32 = 11;
    pub const OVERTWISTED: i32 = 12;

    /// `Inconclusive` and `NonvanishingC` are informational and exit 0.
    pub fn for_level(level: Level) -> i32 {
        match level {
            Level::Inconclusive | Level::NonvanishingC => OK,
            Level::CPlusVanishes => C_PLUS_VANISHES,
            Level::CVanishes => C_VANISHES,
            Level::Overtwisted => OVERTWISTED,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String, code: i32) -> Self {
        Output { stdout, stderr: String::new(), code }
    }

    fn fail(err: impl std::fmt::Display, code: i32) -> Self {
        Output { stdout: String::new(), stderr: format!("error: {err}\n"), code }
    }
}

/// What a command reads: a file, or a fixture by name.
#[derive(Clone, Debug)]
pub enum Input {
    File(PathBuf),
    Fixture { name: String, dir: Option<PathBuf> },
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn load(input: &Input) -> Result<PresentationFile, presentation::ParseError> {
    match input {
        Input::File(p) => load_presentation(p),
        Input::Fixture { name, dir } => Source::from_option(dir.as_deref()).load(name),
    }
}

pub fn cmd_invariants(input: &Input, format: Format) -> Output {
    let diagram = match input {
        Input::File(p) => read_file(p).and_then(|text| {
            if is_presentation(&text) {
                presentation::parse_presentation(&text, p.parent()).map(|f| f.diagram)
            } else {
                parse_front(&text).map(|(_, d)| d)
            }
        }),
        Input::Fixture { .. } => load(input).map(|f| f.diagram),
    };
    match diagram {
        Ok(d) => {
            let r = report::invariants_report(&d);
            Output::ok(if format == Format::Json { json(&r) } else { report::invariants_text(&r) }, exit::OK)
        }
        Err(e) => Output::fail(e, exit::INPUT),
    }
}

pub fn cmd_classify(input: &Input, table: Option<&Path>, disabled: &[RuleId], format: Format) -> Output {
    let table = match table_file::load_table(table) {
        Ok(t) => t,
        Err(e) => return Output::fail(e, exit::INPUT),
    };
    let file = match load(input) {
        Ok(f) => f,
        Err(e) => return Output::fail(e, exit::INPUT),
    };
    let opts = ClassifyOptions { disabled: disabled.iter().copied().collect() };
    match classify_with(&file.presentation, &table, &opts) {
        Ok(rep) => {
            let text = if format == Format::Json { json(&rep) } else { report::classify_text(&rep) };
            Output::ok(text, exit::for_level(rep.verdict.level))
        }
        Err(ClassifyError::InternalInconsistency { nonvanishing, vanishing, report: rep }) => {
            let names: Vec<&str> = vanishing.iter().map(|r| r.name()).collect();
            let mut stderr = format!("error: internal inconsistency: {nonvanishing} fired together with {}\n", names.join(", "));
            stderr.push_str(&report::classify_text(&rep));
            Output { stdout: String::new(), stderr, code: exit::INCONSISTENT }
        }
        Err(e) => Output::fail(e, exit::INPUT),
    }
}

#[derive(Clone, Debug, Serialize)]
struct ExampleRow {
    name: String,
    expected: Option<String>,
    level: Option<String>,
    rule: Option<String>,
    passed: bool,
    diffs: Vec<String>,
}

pub fn cmd_examples(dir: Option<&Path>, only: Option<&str>, table: Option<&Path>, format: Format) -> Output {
    let table = match table_file::load_table(table) {
        Ok(t) => t,
        Err(e) => return Output::fail(e, exit::INPUT),
    };
    let outcomes = match fixtures::run_all(&Source::from_option(dir), &table, only) {
        Ok(o) => o,
        Err(e) => return Output::fail(e, exit::INPUT),
    };
    let all_ok = outcomes.iter().all(fixtures::Outcome::passed);
    let code = if all_ok { exit::OK } else { exit::MISMATCH };
    let rows: Vec<ExampleRow> = outcomes
        .iter()
        .map(|o| ExampleRow {
            name: o.name.clone(),
            expected: o.expected.as_ref().map(|e| e.level.to_string()),
            level: o.level.map(|l| l.to_string()),
            rule: o.rule.map(|r| r.name().to_string()),
            passed: o.passed(),
            diffs: o.diffs.clone(),
        })
        .collect();
    if format == Format::Json {
        return Output::ok(json(&rows), code);
    }
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(7).max(7);
    let mut out = format!("{:<width$}  {:<14} {:<14} {:<22} status\n", "fixture", "expected", "got", "rule");
    for r in &rows {
        let dash = || "-".to_string();
        out.push_str(&format!(
            "{:<width$}  {:<14} {:<14} {:<22} {}\n",
            r.name,
            r.expected.clone().unwrap_or_else(dash),
            r.level.clone().unwrap_or_else(dash),
            r.rule.clone().unwrap_or_else(dash),
            if r.passed { "ok" } else { "MISMATCH" }
        ));
        for d in &r.diffs {
            out.push_str(&format!("    {d}\n"));
        }
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} fixtures match\n", rows.len()));
    Output::ok(out, code)
}

pub fn cmd_snf(text: &str, class: Option<&str>, format: Format) -> Output {
    let a = match report::parse_matrix(text) {
        Ok(a) => a,
        Err(e) => return Output::fail(e, exit::INPUT),
    };
    let class: Option<Vec<BigInt>> = match class {
        None => None,
        Some(s) => match s.split(',').map(|t| t.trim().parse::<BigInt>()).collect::<Result<Vec<_>, _>>() {
            Ok(v) if v.len() == a.len() => Some(v),
            Ok(v) => return Output::fail(format!("class has {} entries, matrix has {} rows", v.len(), a.len()), exit::INPUT),
            Err(_) => return Output::fail(format!("class `{s}` is not a comma-separated integer vector"), exit::INPUT),
        },
    };
    let r = report::snf_report(&a, class.as_deref());
    Output::ok(if format == Format::Json { json(&r) } else { report::snf_text(&r) }, exit::OK)
}

pub fn cmd_knots(table: Option<&Path>) -> Output {
    match table_file::load_table(table) {
        Ok(t) => Output::ok(table_file::render_knot_table(&t), exit::OK),
        Err(e) => Output::fail(e, exit::INPUT),
    }
}

/// Level names accepted and printed by the CLI, in lattice order.
pub const LEVELS: [Level; 5] =
    [Level::Inconclusive, Level::NonvanishingC, Level::CPlusVanishes, Level::CVanishes, Level::Overtwisted];
