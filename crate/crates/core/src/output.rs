//! Reproducible text output: CSV tables, JSON reports and atomic file writes.
//!
//! Every floating-point value is written in scientific notation with 17
//! significant digits, which round-trips any `f64` exactly and does not
//! depend on locale or thread count.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};
use tempfile::NamedTempFile;

use crate::error::Result;

/// `x` with 17 significant digits, e.g. `-1.2500000000000000e-1`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // normalise negative zero so sign noise never changes the bytes
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// A JSON number carrying the fixed 17-digit representation, or `null` when `x` is not finite.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // the fixed format is valid JSON number syntax, so parsing cannot fail
    let n: Number = serde_json::from_str(&format_f64(x)).expect("formatted float is a JSON number");
    Value::Number(n)
}

pub fn json_f64_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_f64(x)).collect())
}

/// JSON object builder; keys are emitted in sorted order.
#[derive(Clone, Debug, Default)]
pub struct JsonReport(Map<String, Value>);

impl JsonReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn float(mut self, key: &str, x: f64) -> Self {
        self.0.insert(key.to_owned(), json_f64(x));
        self
    }

    pub fn floats(mut self, key: &str, xs: &[f64]) -> Self {
        self.0.insert(key.to_owned(), json_f64_array(xs));
        self
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), v.into());
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.0).expect("JSON maps always serialise");
        s.push('\n');
        s
    }
}

/// Comma-separated table with a header row and LF line endings.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// One CSV cell.
#[derive(Clone, Copy, Debug)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Flag(bool),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Float(x) => format_f64(x),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| (*h).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    ///
    /// # Panics
    /// When the row length differs from the header length.
    pub fn push(&mut self, row: &[Cell]) {
        assert_eq!(row.len(), self.header.len(), "CSV row width must match the header");
        self.rows.push(row.iter().map(|c| c.render()).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
