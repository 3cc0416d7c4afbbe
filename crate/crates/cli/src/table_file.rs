//! Knot table files: one record per line, `name tau genus l_space_knot
//! [tb_max]`, `#` starts a comment.

use std::path::{Path, PathBuf};

use legsurg_core::classify::{KnotRecord, KnotTable, TableError};

use crate::presentation::{read_file, ParseError};

/// Environment variable naming a knot table to use instead of the bundled one.
pub const TABLE_ENV: &str = "LEGSURG_KNOT_TABLE";

#[derive(Debug, thiserror::Error)]
pub enum TableFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TableError },
    #[error(transparent)]
    Read(#[from] ParseError),
}

pub fn parse_knot_table(text: &str) -> Result<KnotTable, TableFileError> {
    let mut table = KnotTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = |msg: String| TableFileError::Syntax { line, msg };
        let f: Vec<&str> = body.split_whitespace().collect();
        if !(4..=5).contains(&f.len()) {
            return Err(bad(format!("expected `name tau genus l_space_knot [tb_max]`, found {} fields", f.len())));
        }
        let rec = KnotRecord {
            name: f[0].to_string(),
            tau: f[1].parse().map_err(|_| bad(format!("tau `{}` is not rational", f[1])))?,
            genus: f[2].parse().map_err(|_| bad(format!("genus `{}` is not a nonnegative integer", f[2])))?,
            l_space_knot: match f[3] {
                "true" => true,
                "false" => false,
                other => return Err(bad(format!("l_space_knot `{other}` is not true/false"))),
            },
            tb_max: match f.get(4) {
                Some(s) => Some(s.parse().map_err(|_| bad(format!("tb_max `{s}` is not an integer")))?),
                None => None,
            },
        };
        table.insert(rec).map_err(|source| TableFileError::Invalid { line, source })?;
    }
    Ok(table)
}

pub fn render_knot_table(table: &KnotTable) -> String {
    let mut out = String::from("# name tau genus l_space_knot tb_max\n");
    for r in table.records() {
        out.push_str(&format!("{} {} {} {}", r.name, r.tau, r.genus, r.l_space_knot));
        if let Some(tb) = r.tb_max {
            out.push_str(&format!(" {tb}"));
        }
        out.push('\n');
    }
    out
}

/// The table named on the command line, else the one in the environment,
/// else the bundled table.
pub fn load_table(explicit: Option<&Path>) -> Result<KnotTable, TableFileError> {
    let path: Option<PathBuf> =
        explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(TABLE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    match path {
        Some(p) => parse_knot_table(&read_file(&p)?),
        None => Ok(KnotTable::bundled()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_round_trips() {
        let t = KnotTable::bundled();
        assert_eq!(parse_knot_table(&render_knot_table(&t)).unwrap(), t);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(matches!(parse_knot_table("k 1 1\n"), Err(TableFileError::Syntax { line: 1, .. })));
        assert!(matches!(parse_knot_table("# c\nk 0 1 true\n"), Err(TableFileError::Invalid { line: 2, .. })));
        assert!(matches!(parse_knot_table("k 0 1 maybe\n"), Err(TableFileError::Syntax { .. })));
        assert!(matches!(parse_knot_table("k 0 1 false\nk 0 1 false\n"), Err(TableFileError::Invalid { line: 2, .. })));
    }
}
