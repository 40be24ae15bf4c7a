//! CSV output with a `#`-prefixed metadata header.
//!
//! ```text
//! # tool: lmg 0.1.0
//! # command: sweep
//! # config_sha256: 3f1c...
//! # config: {"sizes":[64],...}
//! # generated: 2026-01-01T00:00:00Z
//! N,gamma,h,chi,...
//! ```
//!
//! The `# generated:` line is the only content that differs between replays.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::config::RunConfig;
use crate::error::CliError;

pub const GENERATED_PREFIX: &str = "# generated:";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn new(command: &str, config: &RunConfig, columns: &[&str]) -> Self {
        ResultTable {
            meta: vec![
                ("tool".into(), format!("lmg {}", env!("CARGO_PKG_VERSION"))),
                ("command".into(), command.into()),
                ("config_sha256".into(), config.sha256()),
                ("config".into(), config.canonical_json()),
            ],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Parsed numeric column; empty cells become `None`.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }

    /// CSV text; `generated` is written as its own header line when given.
    pub fn to_csv(&self, generated: Option<&str>) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        if let Some(ts) = generated {
            writeln!(out, "{GENERATED_PREFIX} {ts}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| escape(c)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        let ts = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        let text = self.to_csv(Some(&ts));
        match path {
            Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Shortest round-trip representation; deterministic across runs.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Drop the timestamp line so two outputs can be compared byte for byte.
pub fn strip_generated(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with(GENERATED_PREFIX))
        .map(|l| format!("{l}\n"))
        .collect()
}
