//! Run report serialization: JSON for the full report, CSV as a flat
//! projection of the per-check summaries.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::verify::{CheckId, CheckSummary, RunReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV report at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

pub const CSV_HEADER: &str =
    "id,probe,instances,max_residual,min_margin,pass,witness_count,max_observed";

pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<RunReport, ReportError> {
    Ok(serde_json::from_str(text)?)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One line per check; absent values are empty cells.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.id,
            c.probe,
            c.instances,
            opt(c.max_residual),
            opt(c.min_margin),
            c.pass,
            c.witness_count,
            opt(c.max_observed)
        );
    }
    out
}

/// The CSV columns of one check summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub id: CheckId,
    pub probe: bool,
    pub instances: usize,
    pub max_residual: Option<f64>,
    pub min_margin: Option<f64>,
    pub pass: bool,
    pub witness_count: usize,
    pub max_observed: Option<f64>,
}

impl From<&CheckSummary> for CsvRow {
    fn from(c: &CheckSummary) -> Self {
        CsvRow {
            id: c.id,
            probe: c.probe,
            instances: c.instances,
            max_residual: c.max_residual,
            min_margin: c.min_margin,
            pass: c.pass,
            witness_count: c.witness_count,
            max_observed: c.max_observed,
        }
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(ReportError::Csv {
                line: 1,
                reason: "missing header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, l)| {
            let err = |reason: String| ReportError::Csv { line: n + 1, reason };
            let cells: Vec<&str> = l.split(',').collect();
            if cells.len() != 8 {
                return Err(err(format!("expected 8 cells, found {}", cells.len())));
            }
            fn cell<T: FromStr>(s: &str) -> Result<T, String> {
                s.parse().map_err(|_| format!("cannot parse `{s}`"))
            }
            let opt = |s: &str| -> Result<Option<f64>, String> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    cell(s).map(Some)
                }
            };
            Ok(CsvRow {
                id: cells[0].parse().map_err(|e| err(format!("{e}")))?,
                probe: cell(cells[1]).map_err(err)?,
                instances: cell(cells[2]).map_err(err)?,
                max_residual: opt(cells[3]).map_err(err)?,
                min_margin: opt(cells[4]).map_err(err)?,
                pass: cell(cells[5]).map_err(err)?,
                witness_count: cell(cells[6]).map_err(err)?,
                max_observed: opt(cells[7]).map_err(err)?,
            })
        })
        .collect()
}
