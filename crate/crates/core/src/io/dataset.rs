//! CSV datasets with a `#` metadata header and a JSON sidecar.
//!
//! Data files contain no timestamps; wall time goes to the sidecar only, so
//! identical configurations give byte-identical CSV files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Value,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<Column>, metadata: Value) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Builds rows from equally long columns.
    pub fn from_columns(name: impl Into<String>, columns: Vec<(Column, Vec<f64>)>, metadata: Value) -> Result<Self> {
        let len = columns.first().map_or(0, |c| c.1.len());
        if columns.iter().any(|c| c.1.len() != len) {
            return Err(Error::GridMismatch("dataset columns differ in length".into()));
        }
        let rows = (0..len).map(|i| columns.iter().map(|c| c.1[i]).collect()).collect();
        Ok(Self {
            name: name.into(),
            columns: columns.into_iter().map(|c| c.0).collect(),
            rows,
            metadata,
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.metadata).expect("metadata serializes");
        writeln!(out, "# dataset: {}", self.name).unwrap();
        writeln!(out, "# format: {FORMAT_VERSION}").unwrap();
        writeln!(out, "# metadata: {meta}").unwrap();
        let units: Vec<&str> = self.columns.iter().map(|c| c.unit.as_str()).collect();
        writeln!(out, "# units: {}", units.join(",")).unwrap();
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        writeln!(out, "{}", names.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

/// Paths written for a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Written {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
pub fn write_dataset(dataset: &Dataset, dir: &Path, wall_time_seconds: f64) -> Result<Written> {
    fs::create_dir_all(dir).map_err(Error::io)?;
    let csv = dir.join(format!("{}.csv", dataset.name));
    let sidecar = dir.join(format!("{}.json", dataset.name));
    fs::write(&csv, dataset.to_csv()).map_err(Error::io)?;
    let side = serde_json::json!({
        "dataset": dataset.name,
        "format": FORMAT_VERSION,
        "columns": dataset.columns.iter().map(|c| serde_json::json!({"name": c.name, "unit": c.unit})).collect::<Vec<_>>(),
        "rows": dataset.rows.len(),
        "metadata": dataset.metadata,
        "wall_time_seconds": wall_time_seconds,
    });
    let mut text = serde_json::to_string_pretty(&side).expect("sidecar serializes");
    text.push('\n');
    fs::write(&sidecar, text).map_err(Error::io)?;
    Ok(Written { csv, sidecar })
}

/// Reads a CSV written by [`write_dataset`].
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(Error::io)?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Dataset> {
    let bad = |msg: &str| Error::Config(format!("dataset: {msg}"));
    let mut name = None;
    let mut metadata = Value::Null;
    let mut units: Vec<String> = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            if let Some(v) = rest.strip_prefix("dataset: ") {
                name = Some(v.to_string());
            } else if let Some(v) = rest.strip_prefix("metadata: ") {
                metadata = serde_json::from_str(v).map_err(|e| bad(&e.to_string()))?;
            } else if let Some(v) = rest.strip_prefix("units: ") {
                units = v.split(',').map(str::to_string).collect();
            }
            continue;
        }
        if columns.is_none() {
            columns = Some(if line.is_empty() {
                Vec::new()
            } else {
                line.split(',').map(str::to_string).collect()
            });
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|e| bad(&format!("{c}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let columns = columns.ok_or_else(|| bad("missing column header"))?;
    if units.len() == 1 && units[0].is_empty() && columns.is_empty() {
        units.clear();
    }
    if units.len() != columns.len() {
        return Err(bad("unit and column counts differ"));
    }
    if rows.iter().any(|r| r.len() != columns.len()) {
        return Err(bad("row width differs from header"));
    }
    Ok(Dataset {
        name: name.ok_or_else(|| bad("missing dataset name"))?,
        columns: columns
            .into_iter()
            .zip(units)
            .map(|(n, u)| Column { name: n, unit: u })
            .collect(),
        rows,
        metadata,
    })
}
