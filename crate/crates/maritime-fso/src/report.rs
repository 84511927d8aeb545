//! Plot-ready result tables and their CSV/JSON serializations.
//!
//! Every CLI verb produces one [`Table`]; the writers guarantee
//!
//! - locale-independent formatting (dot decimal separator, `{:.12e}` floats),
//! - a fixed header row in CSV and stable key order in JSON, and
//! - byte-identical output for identical inputs, so reruns of a fixed
//!   scenario and seed reproduce files exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

// ----- cells and tables --------------------------------------------------------

/// One table cell: a float, an integer, or a short tag.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Cell {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Parse `"csv"` / `"json"` (case-insensitive).
    pub fn parse(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown output format {other:?}; expected \"csv\" or \"json\""
            ))),
        }
    }
}

/// A column-named result table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Append one row; its arity must match the header.
    pub fn push_row(&mut self, cells: Vec<Cell>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row arity {} does not match {} columns",
            cells.len(),
            self.columns.len()
        );
        self.rows.push(cells);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV with a fixed header row. Floats print as `{:.12e}`; text cells are
    /// quoted only when they contain a delimiter, quote, or newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Cell::Num(x) => {
                        let _ = write!(out, "{x:.12e}");
                    }
                    Cell::Int(i) => {
                        let _ = write!(out, "{i}");
                    }
                    Cell::Text(s) => {
                        if s.contains([',', '"', '\n']) {
                            let _ = write!(out, "\"{}\"", s.replace('"', "\"\""));
                        } else {
                            out.push_str(s);
                        }
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON: an array of objects with keys in column order. Non-finite floats
    /// serialize as `null` (JSON has no NaN/∞).
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(x) => serde_json::Number::from_f64(*x)
                            .map(serde_json::Value::Number)
                            .unwrap_or(serde_json::Value::Null),
                        Cell::Int(i) => serde_json::Value::from(*i),
                        Cell::Text(s) => serde_json::Value::from(s.as_str()),
                    };
                    obj.insert(name.clone(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("tables are always serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Write to `path`, or to stdout when `path` is `None`.
    pub fn write(&self, path: Option<&Path>, format: Format) -> Result<()> {
        let body = self.render(format);
        match path {
            Some(p) => fs::write(p, body)
                .map_err(|e| Error::Io(format!("writing {}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Error::Io(format!("writing stdout: {e}"))),
        }
    }
}

// ----- tests ----------------------------------------------------------------
