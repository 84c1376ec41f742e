//! CSV tables. Every file starts with a `# config: {json}` line holding the
//! full [`ExperimentConfig`]; absent values are written as `NA`.

use std::io::Write;
use std::path::Path;

use qprune_core::embedding::CurvePoint;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::experiment::{ResultRow, Table};

pub const COLUMNS: [&str; 9] = [
    "p",
    "strategy",
    "mean_ratio",
    "std_ratio",
    "best_ratio",
    "valid_fraction",
    "baseline_ratio",
    "embeddable_ratio",
    "physical_qubits",
];

pub const CURVE_COLUMNS: [&str; 3] = ["p", "size", "ratio"];

const CONFIG_PREFIX: &str = "# config: ";
const NA: &str = "NA";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| NA.to_string(), |v| v.to_string())
}

fn parse_opt<T: std::str::FromStr>(field: &str) -> Option<std::result::Result<T, T::Err>> {
    (field != NA).then(|| field.parse())
}

fn write_with_header(path: &Path, provenance: &str, header: &[&str], records: Vec<Vec<String>>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = Vec::new();
    writeln!(out, "{CONFIG_PREFIX}{provenance}")?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for r in records {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes `table` in the fixed [`COLUMNS`] order.
pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(HarnessError::EmptyTable);
    }
    let records = table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                r.strategy.clone(),
                r.mean_ratio.to_string(),
                r.std_ratio.to_string(),
                r.best_ratio.to_string(),
                r.valid_fraction.to_string(),
                r.baseline_ratio.to_string(),
                opt(r.embeddable_ratio),
                opt(r.physical_qubits),
            ]
        })
        .collect();
    write_with_header(path, &table.config.to_json(), &COLUMNS, records)
}

fn bad_row(path: &Path, line: u64, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse { path: path.to_path_buf(), line: line as usize, message: message.into() }
}

/// The embedded config line, if the file has one.
pub fn read_config_line(text: &str) -> Option<Result<ExperimentConfig>> {
    let first = text.lines().next()?;
    first.strip_prefix(CONFIG_PREFIX).map(ExperimentConfig::from_json)
}

/// Reads a table written by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| HarnessError::Read { path: path.to_path_buf(), source })?;
    let config = read_config_line(&text).ok_or_else(|| bad_row(path, 1, "missing config line"))??;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(bad_row(path, 2, format!("unexpected columns {header:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let f = |k: usize| record.get(k).unwrap_or_default();
        let num = |k: usize| f(k).parse::<f64>().map_err(|_| bad_row(path, line, format!("bad {}", COLUMNS[k])));
        rows.push(ResultRow {
            p: num(0)?,
            strategy: f(1).to_string(),
            mean_ratio: num(2)?,
            std_ratio: num(3)?,
            best_ratio: num(4)?,
            valid_fraction: num(5)?,
            baseline_ratio: num(6)?,
            embeddable_ratio: parse_opt(f(7)).transpose().map_err(|_| bad_row(path, line, "bad embeddable_ratio"))?,
            physical_qubits: parse_opt(f(8)).transpose().map_err(|_| bad_row(path, line, "bad physical_qubits"))?,
        });
    }
    Ok(Table { config, rows, warnings: Vec::new() })
}

/// Provenance of an `embed-curve` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveConfig {
    pub problem: String,
    pub strategy: String,
    pub granularity: f64,
    pub chimera: crate::config::ChimeraDims,
    pub attempts: usize,
    pub master_seed: u64,
}

pub fn emit_curve_csv(cfg: &CurveConfig, points: &[CurvePoint], path: &Path) -> Result<()> {
    if points.is_empty() {
        return Err(HarnessError::EmptyTable);
    }
    let records = points.iter().map(|c| vec![c.p.to_string(), c.size.to_string(), opt(c.ratio)]).collect();
    write_with_header(path, &serde_json::to_string(cfg)?, &CURVE_COLUMNS, records)
}
