//! Deterministic report emission.
//!
//! Floats are always written with 17 significant digits, field order is the
//! declaration order of the payload structs, and the same run specification
//! therefore produces byte-identical files.

use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

pub const SCHEMA: &str = "wehrl-lab/1";

/// Build identifier that does not depend on the checkout state.
pub fn build_id() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other} (expected csv | json)")),
        }
    }
}

/// 17-significant-digit float text, shared by the CSV and JSON writers.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON formatter that pins float formatting to 17 significant digits.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Top-level JSON envelope; every campaign report shares it.
#[derive(Serialize)]
pub struct Envelope<P: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub parameters: P,
    pub build: String,
    pub seed: u64,
    pub verdict: &'static str,
    pub min_slack: f64,
    pub report: R,
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser).expect("report serialization");
    out.push(b'\n');
    out
}

/// A CSV table with a mandatory header row.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "ragged CSV row");
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out.into_bytes()
    }
}

/// Write the report to `--out` (or stdout). I/O problems map to exit 74.
pub fn emit(bytes: &[u8], out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("stdout: {e}")),
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
    }
}
