//! Tables, CSV and JSON emission.
//!
//! Floats are written with 17 significant digits so that output files are
//! byte-stable for fixed inputs.

use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Self::F(x) => format!("{x:.16e}"),
            Self::I(i) => i.to_string(),
            Self::S(s) => s.clone(),
            Self::B(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::F(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::I(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::B(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::S(s.to_string())
    }
}

/// Header plus rows of equal width.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path).map_err(CliError::runtime)?;
        w.write_record(&self.header).map_err(CliError::runtime)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(CliError::runtime)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Result of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub summary: Value,
    /// Scalar results, one row per record; merged across sweep points.
    pub records: Table,
    /// `(file name, table)` for per-trace CSVs.
    pub traces: Vec<(String, Table)>,
}

/// JSON number, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::runtime)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
