//! Unit-annotated CSV.
//!
//! ```text
//! # secondhand yachts
//! length[ft],price[GBP],age[yr]
//! 32,45000,12
//! ```
//!
//! Headers are `name[unit-expression]`; `#` lines and blank lines are
//! skipped. Reported line numbers are 1-based lines of the file.

use std::fs;
use std::path::Path;

use csv::{ReaderBuilder, Trim};
use thiserror::Error;

use crate::regression::{Column, DataSet, FitError};
use crate::units::{Unit, UnitError, UnitRegistry};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("missing header row")]
    MissingHeader,
    #[error("header `{0}` is not of the form name[unit]")]
    BadHeader(String),
    #[error("duplicate column `{0}`")]
    DuplicateHeader(String),
    #[error("column `{column}`: {source}")]
    Unit {
        column: String,
        #[source]
        source: UnitError,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged { line: u64, expected: usize, found: usize },
    #[error("line {line}, column `{column}`: cannot parse `{text}` as a number")]
    BadCell { line: u64, column: String, text: String },
    #[error("no data rows")]
    Empty,
    #[error("malformed csv: {0}")]
    Syntax(#[from] csv::Error),
    #[error(transparent)]
    Data(#[from] FitError),
}

/// Splits `name[unit]` and resolves the unit.
pub fn parse_header(text: &str, registry: &UnitRegistry) -> Result<(String, Unit), CsvError> {
    let bad = || CsvError::BadHeader(text.to_string());
    let open = text.find('[').ok_or_else(bad)?;
    let inner = text[open + 1..].strip_suffix(']').ok_or_else(bad)?;
    let name = text[..open].trim();
    if name.is_empty() || inner.contains(['[', ']']) {
        return Err(bad());
    }
    let unit = registry.parse_unit(inner).map_err(|source| CsvError::Unit {
        column: name.to_string(),
        source,
    })?;
    Ok((name.to_string(), unit))
}

pub fn parse_csv(text: &str, registry: &UnitRegistry) -> Result<DataSet, CsvError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = loop {
        match records.next() {
            None => return Err(CsvError::MissingHeader),
            Some(rec) => {
                let rec = rec?;
                if rec.iter().all(str::is_empty) {
                    continue;
                }
                break rec;
            }
        }
    };
    let mut schema: Vec<(String, Unit)> = Vec::with_capacity(header.len());
    for field in header.iter() {
        let (name, unit) = parse_header(field, registry)?;
        if schema.iter().any(|(n, _)| *n == name) {
            return Err(CsvError::DuplicateHeader(name));
        }
        schema.push((name, unit));
    }

    let mut values: Vec<Vec<f64>> = vec![Vec::new(); schema.len()];
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != schema.len() {
            return Err(CsvError::Ragged {
                line,
                expected: schema.len(),
                found: rec.len(),
            });
        }
        for (i, cell) in rec.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| CsvError::BadCell {
                    line,
                    column: schema[i].0.clone(),
                    text: cell.to_string(),
                })?;
            values[i].push(v);
        }
    }
    if values.first().is_none_or(Vec::is_empty) {
        return Err(CsvError::Empty);
    }
    let columns = schema
        .into_iter()
        .zip(values)
        .map(|((name, unit), v)| Column::new(name, unit, v))
        .collect();
    Ok(DataSet::new(columns)?)
}

pub fn load_csv(path: impl AsRef<Path>, registry: &UnitRegistry) -> Result<DataSet, CsvError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(&text, registry)
}

/// Canonical text form: shortest round-trip decimal for every value.
pub fn write_csv(ds: &DataSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = ds
        .columns()
        .iter()
        .map(|c| format!("{}[{}]", c.name, c.unit.symbol()))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in 0..ds.n() {
        let cells: Vec<String> = ds.columns().iter().map(|c| c.values[row].to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
