//! Tables of results and their on-disk formats.
//!
//! Every float is written as `{:.16e}` (17 significant digits), in CSV and in
//! JSON alike, so identical inputs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::{HarnessError, Result};

/// What a column must satisfy before it is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Finite,
    /// In [0, 1] within 1e-10: coherences and visibilities.
    Unit,
    /// At least −1e-12 times the column maximum: intensities and densities.
    NonNegative,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(&'static str, Check)>,
    pub rows: Vec<Vec<f64>>,
    pub meta: Map<String, Value>,
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A JSON number carrying the fixed 17-digit text.
pub fn num(v: f64) -> Value {
    match fmt_float(v).parse::<Number>() {
        Ok(n) if v.is_finite() => Value::Number(n),
        _ => Value::Null,
    }
}

pub fn nums(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| num(v)).collect())
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<(&'static str, Check)>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new(), meta: Map::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|(c, _)| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn validate(&self) -> Result<()> {
        for (i, (name, check)) in self.columns.iter().enumerate() {
            let field = format!("{}.{}", self.name, name);
            let peak = self.rows.iter().map(|r| r[i]).fold(0.0_f64, f64::max);
            for (r, row) in self.rows.iter().enumerate() {
                let v = row[i];
                let ok = v.is_finite()
                    && match check {
                        Check::Finite => true,
                        Check::Unit => (-1e-10..=1.0 + 1e-10).contains(&v),
                        Check::NonNegative => v >= -1e-12 * peak.max(f64::MIN_POSITIVE),
                    };
                if !ok {
                    return Err(HarnessError::validation(field, format!("row {r} holds {v}, violating {check:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let err = |e: csv::Error| HarnessError::validation(self.name.clone(), e.to_string());
        w.write_record(self.columns.iter().map(|(c, _)| *c)).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_float(v))).map_err(err)?;
        }
        w.into_inner().map_err(|e| HarnessError::validation(self.name.clone(), e.to_string()))
    }

    pub fn to_json(&self, shared: &Map<String, Value>) -> Vec<u8> {
        let mut meta = shared.clone();
        meta.extend(self.meta.clone());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(self.columns.iter().zip(row).map(|((c, _), &v)| (c.to_string(), num(v))).collect())
            })
            .collect();
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values always serialize");
        text.push('\n');
        text.into_bytes()
    }

    /// Validates and writes `<dir>/<name>.<ext>`.
    pub fn write(&self, dir: &Path, format: Format, shared: &Map<String, Value>) -> Result<PathBuf> {
        self.validate()?;
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        let bytes = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json(shared),
        };
        fs::write(&path, bytes).map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }
}
