//! Reports: a JSON document per run plus CSV tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    /// CSV form: 17 significant digits in scientific notation.
    pub fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Builds a row from heterogeneous values.
#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => { vec![$($crate::report::Cell::from($v)),*] };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Large tables (samples) only go to CSV.
    pub in_report: bool,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            in_report: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(Cell::json)).collect::<Map<_, _>>()))
                .collect(),
        )
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let csv_err = |source| CliError::Csv { path: path.to_path_buf(), source };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}

/// What a command produces before it is wrapped into a [`Report`].
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub holds: bool,
    pub summary: Value,
    pub tables: Vec<Table>,
    /// Extra files, written by the command itself when an output
    /// directory is configured.
    pub blobs: Vec<Blob>,
}

#[derive(Debug, Clone)]
pub struct Blob {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub outcome: Outcome,
    pub seconds: f64,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let tables: Map<String, Value> = self
            .outcome
            .tables
            .iter()
            .filter(|t| t.in_report)
            .map(|t| (t.name.clone(), t.json()))
            .collect();
        json!({
            "command": self.command,
            "versions": {
                "fracwave": env!("CARGO_PKG_VERSION"),
                "fracwave-core": fracwave_core::VERSION,
            },
            "config": self.config,
            "config_hash": self.config.hash(),
            "holds": self.outcome.holds,
            "summary": self.outcome.summary,
            "tables": tables,
            "timings": { "wall_seconds": self.seconds },
        })
    }

    /// Writes `<command>.json`, one CSV per table and the blobs into `dir`;
    /// returns the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        for t in &self.outcome.tables {
            let path = dir.join(format!("{}.csv", t.name));
            t.write_csv(&path)?;
            written.push(path);
        }
        for b in &self.outcome.blobs {
            let path = dir.join(&b.name);
            fs::write(&path, &b.bytes).map_err(io(&path))?;
            written.push(path);
        }
        let path = dir.join(format!("{}.json", self.command));
        let mut f = fs::File::create(&path).map_err(io(&path))?;
        serde_json::to_writer_pretty(&mut f, &self.to_json()).map_err(|source| CliError::Json { path: path.clone(), source })?;
        writeln!(f).map_err(io(&path))?;
        written.push(path);
        Ok(written)
    }
}
