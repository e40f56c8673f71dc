//! Stored case tables and their comparison against fresh classifications.

use std::fs;
use std::path::{Path, PathBuf};

use bolops::algebra::Algebra;
use bolops::singular::{classify, Case, ClassifyError, Config};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed golden table {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Classify { path: PathBuf, source: ClassifyError },
    #[error("no golden tables in {0}")]
    Empty(PathBuf),
    #[error("golden tables differ")]
    Mismatch(Vec<String>),
}

#[derive(Debug, Deserialize)]
struct Table {
    a: usize,
    b: usize,
    degree: u32,
    algebra: Algebra,
    cases: Vec<Row>,
}

#[derive(Debug, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    top: String,
    v: String,
    f: String,
    finite: bool,
}

impl Row {
    fn line(&self) -> String {
        format!("{}: {} -> {}{}", self.top, self.v, self.f, if self.finite { "" } else { " (no finite-dimensional V)" })
    }
}

pub fn default_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden")
}

fn rows(c: &[Case]) -> Vec<Row> {
    c.iter()
        .map(|c| Row {
            top: c.top_label.clone(),
            v: Case::render_weight(&c.weight_v),
            f: Case::render_weight(&c.weight_f),
            finite: c.finiteness.finite_witness.is_some(),
        })
        .collect()
}

/// Compare every `*.json` table in `dir`; returns the number of tables.
pub fn compare_all(dir: &Path) -> Result<usize, GoldenError> {
    let io = |source| GoldenError::Io { path: dir.to_path_buf(), source };
    let mut files: Vec<PathBuf> = fs::read_dir(dir).map_err(io)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    files.sort();
    if files.is_empty() {
        return Err(GoldenError::Empty(dir.to_path_buf()));
    }
    let mut diffs = Vec::new();
    for path in &files {
        let text = fs::read_to_string(path).map_err(|source| GoldenError::Io { path: path.clone(), source })?;
        let table: Table = serde_json::from_str(&text).map_err(|source| GoldenError::Parse { path: path.clone(), source })?;
        let cfg = Config::new(table.a, table.b, table.degree, table.algebra);
        let c = classify(&cfg).map_err(|source| GoldenError::Classify { path: path.clone(), source })?;
        let mut want = table.cases;
        let mut got = rows(&c.cases);
        want.sort();
        got.sort();
        if want != got {
            let mut d = format!("--- {} (expected)\n+++ ({},{},{},{}) (found)\n", path.display(), table.a, table.b, table.degree, table.algebra);
            for r in want.iter().filter(|r| !got.contains(r)) {
                d.push_str(&format!("- {}\n", r.line()));
            }
            for r in got.iter().filter(|r| !want.contains(r)) {
                d.push_str(&format!("+ {}\n", r.line()));
            }
            diffs.push(d);
        }
    }
    if diffs.is_empty() {
        Ok(files.len())
    } else {
        Err(GoldenError::Mismatch(diffs))
    }
}
