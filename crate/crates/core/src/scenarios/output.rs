use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::constants::{DerivedScales, PhysicalConstants};
use crate::error::Result;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<&'static str> for Cell {
    fn from(x: &'static str) -> Self {
        Cell::Text(x)
    }
}

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        // adding zero maps -0 to +0
        format!("{:.16e}", x + 0.0)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => (*s).to_string(),
        }
    }
}

/// A file written by a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputFile {
    pub file: String,
    /// Data rows, excluding the header; absent for non-tabular files.
    pub rows: Option<usize>,
}

/// Collects output files for one run under a single directory.
#[derive(Debug)]
pub struct OutputSink {
    dir: PathBuf,
    files: Vec<OutputFile>,
}

impl OutputSink {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[OutputFile] {
        &self.files
    }

    /// Writes `<dir>/<name>` as comma-separated values with a header row.
    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<usize>
    where
        I: IntoIterator<Item = Vec<Cell>>,
    {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(self.dir.join(name))?;
        writer.write_record(header)?;
        let mut count = 0;
        for row in rows {
            writer.write_record(row.iter().map(Cell::render))?;
            count += 1;
        }
        writer.flush()?;
        self.files.push(OutputFile {
            file: name.to_string(),
            rows: Some(count),
        });
        Ok(count)
    }

    pub fn write_text(&mut self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push(OutputFile {
            file: name.to_string(),
            rows: None,
        });
        Ok(())
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one run, written once after every other output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub code_version: String,
    pub seed: u64,
    /// Parameters as given in the config file and overrides.
    pub config: Value,
    pub constants: PhysicalConstants<f64>,
    pub derived_scales: DerivedScales<f64>,
    /// Effective solver settings (dt, n, stride, ...).
    pub solver: Map<String, Value>,
    /// Headline numbers computed by the run.
    pub results: Map<String, Value>,
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(dir.join(MANIFEST_FILE), text)?;
        Ok(())
    }
}
