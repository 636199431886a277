//! Flat-file plumbing: a '#' metadata header followed by a comma-separated
//! table. Floats are written in shortest round-trip form, so emitting and
//! re-ingesting a file reproduces the exact same values.

use std::fmt::Display;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::CliError;

/// First header line of every file this tool writes.
pub const FORMAT_TAG: &str = "cheshire-fringe v1";

/// Ordered `key = value` pairs carried in the '#' header.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str, path: &Path) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| {
            CliError::Validation(format!(
                "{}: missing '# {key} = ...' header line",
                path.display()
            ))
        })
    }

    pub fn require_f64(&self, key: &str, path: &Path) -> Result<f64, CliError> {
        let raw = self.require(key, path)?;
        raw.parse().map_err(|_| {
            CliError::Validation(format!(
                "{}: header '{key}' is not numeric: {raw:?}",
                path.display()
            ))
        })
    }

    pub fn f64_or(&self, key: &str, default: f64, path: &Path) -> Result<f64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(_) => self.require_f64(key, path),
        }
    }
}

/// Appends the generation time unless the caller asked for stable bytes.
pub fn stamp(metadata: &mut Metadata, timestamp: bool) {
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        metadata.push("generated_unix", secs);
    }
}

pub fn write_table(
    path: &Path,
    metadata: &Metadata,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let file = fs::File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    writeln!(out, "# {FORMAT_TAG}").map_err(io_err)?;
    for (key, value) in &metadata.entries {
        writeln!(out, "# {key} = {value}").map_err(io_err)?;
    }
    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
    for row in rows {
        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// One parsed data row with its 1-based source line, for error reporting.
#[derive(Debug, Clone)]
pub struct Row {
    pub line: u64,
    pub fields: Vec<String>,
}

#[derive(Debug)]
pub struct Table {
    pub metadata: Metadata,
    pub headers: Vec<String>,
    pub rows: Vec<Row>,
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;

    let mut metadata = Metadata::default();
    for line in content.lines() {
        let Some(comment) = line.trim_start().strip_prefix('#') else {
            continue;
        };
        if let Some((key, value)) = comment.split_once('=') {
            metadata.push(key.trim(), value.trim());
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(CliError::Validation(format!(
            "{}: no header row found",
            path.display()
        )));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push(Row {
            line,
            fields: record.iter().map(str::to_string).collect(),
        });
    }
    Ok(Table {
        metadata,
        headers,
        rows,
    })
}

impl Table {
    pub fn column(&self, name: &str, path: &Path) -> Result<usize, CliError> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Validation(format!(
                "{}: missing required column '{name}' (found: {})",
                path.display(),
                self.headers.join(", ")
            ))
        })
    }

    pub fn optional_column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn f64_at(&self, row: &Row, col: usize, path: &Path) -> Result<f64, CliError> {
        let raw = row.fields.get(col).map(String::as_str).unwrap_or("");
        raw.parse().map_err(|_| {
            CliError::Validation(format!(
                "{}: line {}: column '{}' is not numeric: {raw:?}",
                path.display(),
                row.line,
                self.headers[col]
            ))
        })
    }
}

/// A fringe data point as read from disk.
#[derive(Debug, Clone, Copy)]
pub struct SeriesRow {
    pub line: u64,
    pub chi_deg: f64,
    pub value: f64,
    pub sigma: Option<f64>,
}

/// Extracts `chi_deg` plus a value column (and `sigma` when present) and
/// enforces the strictly increasing chi order shared by all fringe files.
pub fn series_rows(table: &Table, path: &Path, value_column: &str) -> Result<Vec<SeriesRow>, CliError> {
    let chi_col = table.column("chi_deg", path)?;
    let value_col = table.column(value_column, path)?;
    let sigma_col = table.optional_column("sigma");

    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let sigma = match sigma_col {
            Some(col) => Some(table.f64_at(row, col, path)?),
            None => None,
        };
        rows.push(SeriesRow {
            line: row.line,
            chi_deg: table.f64_at(row, chi_col, path)?,
            value: table.f64_at(row, value_col, path)?,
            sigma,
        });
    }

    for pair in rows.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        if next.chi_deg == prev.chi_deg {
            return Err(CliError::Validation(format!(
                "{}: line {}: duplicate chi value {}",
                path.display(),
                next.line,
                next.chi_deg
            )));
        }
        if next.chi_deg < prev.chi_deg {
            return Err(CliError::Validation(format!(
                "{}: line {}: chi must increase monotonically ({} after {})",
                path.display(),
                next.line,
                next.chi_deg,
                prev.chi_deg
            )));
        }
    }
    Ok(rows)
}

/// Shortest round-trip decimal form, shared by every numeric cell we write.
pub fn num(value: impl Display) -> String {
    value.to_string()
}
