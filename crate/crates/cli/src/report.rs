use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::{OutputFormat, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    /// Passes iff `residual ≤ tolerance`.
    pub fn check(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub payload: Value,
    pub verdicts: Vec<Verdict>,
    pub duration_ms: u64,
    /// Rows for CSV output; the header comes first.
    #[serde(skip)]
    pub table: Vec<Vec<String>>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Shortest text that parses back to the same `f64`; `.` decimal point.
pub(crate) fn num(x: f64) -> String {
    format!("{x:?}")
}

fn csv_text(rows: &[Vec<String>]) -> std::io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given"))
}

/// JSON report, or the command's table as CSV. Commands without a table of
/// their own emit their verdicts as CSV.
pub fn emit_report(r: &Report, cfg: &RunConfig) -> std::io::Result<String> {
    match cfg.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r)?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv if !r.table.is_empty() => csv_text(&r.table),
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "name".to_string(),
                "residual".into(),
                "tolerance".into(),
                "pass".into(),
            ]];
            rows.extend(r.verdicts.iter().map(|v| {
                vec![v.name.clone(), num(v.residual), num(v.tolerance), v.pass.to_string()]
            }));
            csv_text(&rows)
        }
    }
}

/// Writes to `--out-file` if given, otherwise to standard output.
pub fn write_report(r: &Report, cfg: &RunConfig) -> std::io::Result<()> {
    let text = emit_report(r, cfg)?;
    match &cfg.out_file {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
