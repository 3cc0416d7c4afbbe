//! Bundled example presentations and their recorded outcomes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use legsurg_core::classify::{classify, KnotTable, Level, Report, RuleId, Value};
use legsurg_core::Rational;

use crate::presentation::{parse_presentation, read_file, ParseError};

/// Name and text of every bundled fixture, sorted by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("figure-eight-summand", include_str!("../fixtures/figure-eight-summand.pres")),
    ("hopf-negative", include_str!("../fixtures/hopf-negative.pres")),
    ("left-trefoil-beside-unknot", include_str!("../fixtures/left-trefoil-beside-unknot.pres")),
    ("linked-trefoils", include_str!("../fixtures/linked-trefoils.pres")),
    ("torus-meridian-figure-eight", include_str!("../fixtures/torus-meridian-figure-eight.pres")),
    ("trefoil-push-off", include_str!("../fixtures/trefoil-push-off.pres")),
    ("unknot-meridian-left-trefoil", include_str!("../fixtures/unknot-meridian-left-trefoil.pres")),
];

pub const BUNDLED_EXPECTATIONS: &str = include_str!("../fixtures/expected.txt");

/// Where fixtures come from: the bundled set or a directory of `.pres`
/// files with an `expected.txt`.
#[derive(Clone, Debug)]
pub enum Source {
    Bundled,
    Dir(PathBuf),
}

impl Source {
    pub fn from_option(dir: Option<&Path>) -> Self {
        dir.map_or(Source::Bundled, |d| Source::Dir(d.to_path_buf()))
    }

    pub fn names(&self) -> Result<Vec<String>, ParseError> {
        match self {
            Source::Bundled => Ok(BUNDLED.iter().map(|(n, _)| n.to_string()).collect()),
            Source::Dir(d) => {
                let entries = std::fs::read_dir(d).map_err(|source| ParseError::Io { path: d.clone(), source })?;
                let mut names: Vec<String> = entries
                    .filter_map(|e| e.ok())
                    .filter_map(|e| {
                        let p = e.path();
                        (p.extension()? == "pres").then(|| p.file_stem()?.to_str().map(str::to_string)).flatten()
                    })
                    .collect();
                names.sort();
                Ok(names)
            }
        }
    }

    /// Text of a fixture and the directory its relative paths resolve in.
    pub fn text(&self, name: &str) -> Result<(String, Option<PathBuf>), ParseError> {
        match self {
            Source::Bundled => BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| (t.to_string(), None))
                .ok_or_else(|| ParseError::Syntax { line: 0, msg: format!("no bundled fixture `{name}`") }),
            Source::Dir(d) => Ok((read_file(&d.join(format!("{name}.pres")))?, Some(d.clone()))),
        }
    }

    pub fn expectations(&self) -> Result<String, ParseError> {
        match self {
            Source::Bundled => Ok(BUNDLED_EXPECTATIONS.to_string()),
            Source::Dir(d) => read_file(&d.join("expected.txt")),
        }
    }

    pub fn load(&self, name: &str) -> Result<crate::presentation::PresentationFile, ParseError> {
        let (text, base) = self.text(name)?;
        parse_presentation(&text, base.as_deref())
    }
}

/// One line of `expected.txt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub name: String,
    pub level: Level,
    pub rule: Option<RuleId>,
    /// Checked against the verdict's hypotheses, then the derived values.
    pub values: BTreeMap<String, Rational>,
}

pub fn parse_expectations(text: &str) -> Result<Vec<Expectation>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = |msg: String| ParseError::Syntax { line, msg };
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() < 3 {
            return Err(bad("expected `name level rule [key=value ...]`".into()));
        }
        let level = Level::parse(f[1]).ok_or_else(|| bad(format!("unknown level `{}`", f[1])))?;
        let rule = match f[2] {
            "-" => None,
            r => Some(RuleId::parse(r).ok_or_else(|| bad(format!("unknown rule `{r}`")))?),
        };
        let mut values = BTreeMap::new();
        for kv in &f[3..] {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, found `{kv}`")))?;
            values.insert(k.to_string(), v.parse().map_err(|_| bad(format!("`{v}` is not rational")))?);
        }
        out.push(Expectation { name: f[0].to_string(), level, rule, values });
    }
    Ok(out)
}

/// Look a value up in the verdict's hypotheses, then in the derived values.
pub fn lookup(report: &Report, key: &str) -> Option<Value> {
    report.verdict.hypotheses.get(key).or_else(|| report.derived.get(key)).cloned()
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub expected: Option<Expectation>,
    pub level: Option<Level>,
    pub rule: Option<RuleId>,
    /// Human-readable differences; empty means the fixture passed.
    pub diffs: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

pub fn check(name: &str, source: &Source, table: &KnotTable, expected: Option<&Expectation>) -> Outcome {
    let mut out = Outcome { name: name.to_string(), expected: expected.cloned(), level: None, rule: None, diffs: Vec::new() };
    let report = match source.load(name) {
        Ok(f) => classify(&f.presentation, table).map_err(|e| e.to_string()),
        Err(e) => Err(e.to_string()),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            out.diffs.push(format!("error: {e}"));
            return out;
        }
    };
    out.level = Some(report.verdict.level);
    out.rule = report.verdict.rule;
    let Some(exp) = expected else {
        out.diffs.push("no recorded expectation".into());
        return out;
    };
    if exp.level != report.verdict.level {
        out.diffs.push(format!("level: expected {}, got {}", exp.level, report.verdict.level));
    }
    if exp.rule != report.verdict.rule {
        let show = |r: Option<RuleId>| r.map_or("-".to_string(), |r| r.name().to_string());
        out.diffs.push(format!("rule: expected {}, got {}", show(exp.rule), show(report.verdict.rule)));
    }
    for (k, v) in &exp.values {
        match lookup(&report, k) {
            Some(Value::Rational(got)) if got == *v => {}
            Some(got) => out.diffs.push(format!("{k}: expected {v}, got {got}")),
            None => out.diffs.push(format!("{k}: expected {v}, not reported")),
        }
    }
    out
}

/// Replay fixtures, optionally only `only`, against the recorded expectations.
pub fn run_all(source: &Source, table: &KnotTable, only: Option<&str>) -> Result<Vec<Outcome>, ParseError> {
    let expectations = parse_expectations(&source.expectations()?)?;
    let mut names = source.names()?;
    if let Some(one) = only {
        if !names.iter().any(|n| n == one) {
            return Err(ParseError::Syntax { line: 0, msg: format!("no fixture `{one}`") });
        }
        names.retain(|n| n == one);
    }
    Ok(names
        .iter()
        .map(|n| check(n, source, table, expectations.iter().find(|e| e.name == *n)))
        .collect())
}
