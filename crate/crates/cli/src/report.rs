//! Report assembly and atomic output.

use std::io::Write;
use std::path::Path;

use ahm_core::check::Check;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// A plot-ready table; cells are preformatted so the CSV is byte-stable.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let width = self.header.len();
        w.write_record(&self.header).map_err(csv_io)?;
        for row in &self.rows {
            let mut row = row.clone();
            row.resize(width, String::new());
            w.write_record(&row).map_err(csv_io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Full-precision cell.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Result for one spec (or one sweep/fuzz batch).
#[derive(Debug, Clone, Serialize)]
pub struct Run {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<Value>,
    pub result: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Run {
    /// `label: name (value, tolerance)` of the first failure.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = &self.error {
            return Some(format!("{}: error: {e}", self.label));
        }
        self.checks.iter().find(|c| !c.passed).map(|c| {
            format!(
                "{}: {} (value {:e}, tolerance {:e})",
                self.label, c.name, c.value, c.tolerance
            )
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub runs: Vec<Run>,
}

impl Report {
    pub fn new(config: RunConfig, runs: Vec<Run>) -> Self {
        let first_failure = runs.iter().find_map(Run::first_failure);
        Self {
            tool: "ahm",
            version: env!("CARGO_PKG_VERSION"),
            config,
            passed: first_failure.is_none(),
            first_failure,
            runs,
        }
    }

    pub fn render(&self, table: &Table) -> Result<String, CliError> {
        match self.config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.into()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => table.to_csv(),
        }
    }
}

/// Writes `text` to `out` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
        }
    }
    Ok(())
}
