//! JSON and CSV matrix files.
//!
//! JSON layout: `{"cols": c, "complex": bool, "data": [[...], ...], "rows": r}`
//! with row-major `data`; real entries are numbers and complex entries are
//! `[re, im]` pairs. The writer emits a canonical form (sorted keys, one row
//! per line, 17 significant digits) so that writing a parsed canonical file
//! reproduces it byte for byte. CSV is accepted for real matrices only.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;
use thiserror::Error;

use crate::linalg::DenseMatrix;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
}

fn schema(message: impl Into<String>) -> FormatError {
    FormatError::Schema(message.into())
}

fn parse_entry(value: &Value, complex: bool, row: usize, col: usize) -> Result<Complex64, FormatError> {
    let number = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| schema(format!("entry ({row}, {col}) is not a number")))
    };
    let z = match value {
        Value::Number(_) => Complex64::new(number(value)?, 0.0),
        Value::Array(pair) if complex && pair.len() == 2 => {
            Complex64::new(number(&pair[0])?, number(&pair[1])?)
        }
        Value::Array(_) if !complex => {
            return Err(schema(format!(
                "entry ({row}, {col}) is a pair but \"complex\" is false"
            )))
        }
        _ => return Err(schema(format!("entry ({row}, {col}) must be a number or [re, im]"))),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(FormatError::NonFinite { row, col });
    }
    Ok(z)
}

fn dimension(doc: &Value, key: &str) -> Result<usize, FormatError> {
    doc.get(key)
        .and_then(Value::as_u64)
        .filter(|&n| n > 0)
        .map(|n| n as usize)
        .ok_or_else(|| schema(format!("\"{key}\" must be a positive integer")))
}

/// Parses a matrix from a JSON value already in memory.
pub fn matrix_from_value(doc: &Value) -> Result<DenseMatrix, FormatError> {
    let rows = dimension(doc, "rows")?;
    let cols = dimension(doc, "cols")?;
    let complex = match doc.get("complex") {
        None => false,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| schema("\"complex\" must be a boolean"))?,
    };
    let data = doc
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("\"data\" must be an array of rows"))?;
    if data.len() != rows {
        return Err(schema(format!("expected {rows} rows, found {}", data.len())));
    }
    let mut m = DenseMatrix::zeros(rows, cols);
    for (i, row) in data.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| schema(format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(schema(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, value) in row.iter().enumerate() {
            m[(i, j)] = parse_entry(value, complex, i, j)?;
        }
    }
    Ok(m)
}

pub fn parse_matrix_json(text: &str) -> Result<DenseMatrix, FormatError> {
    matrix_from_value(&serde_json::from_str(text)?)
}

/// Comma-separated real rows. Blank lines and `#` comments are skipped.
pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix, FormatError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let parsed = parsed.map_err(|e| FormatError::Csv {
            line: index + 1,
            message: e.to_string(),
        })?;
        if let Some(col) = parsed.iter().position(|x| !x.is_finite()) {
            return Err(FormatError::NonFinite {
                row: rows.len(),
                col,
            });
        }
        if let Some(first) = rows.first() {
            if first.len() != parsed.len() {
                return Err(FormatError::Csv {
                    line: index + 1,
                    message: format!("expected {} columns, found {}", first.len(), parsed.len()),
                });
            }
        }
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(schema("CSV file has no rows"));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DenseMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
}

/// Reads `.csv` files as CSV and everything else as JSON.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix, FormatError> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => parse_matrix_csv(&text),
        _ => parse_matrix_json(&text),
    }
}

/// 17 significant digits in scientific notation; round-trips every finite `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn is_complex(m: &DenseMatrix) -> bool {
    m.iter().any(|z| z.im != 0.0)
}

fn entry_value(z: Complex64, complex: bool) -> Value {
    if complex {
        Value::from(vec![z.re, z.im])
    } else {
        Value::from(z.re)
    }
}

/// The matrix-file document for `m` as a JSON value.
pub fn matrix_to_value(m: &DenseMatrix) -> Value {
    let complex = is_complex(m);
    let data: Vec<Value> = m
        .row_iter()
        .map(|row| Value::from(row.iter().map(|&z| entry_value(z, complex)).collect::<Vec<_>>()))
        .collect();
    serde_json::json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "complex": complex,
        "data": data,
    })
}

/// Entries as plain numbers, or `[re, im]` pairs when any entry is complex.
pub fn vector_to_value<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> Value {
    let entries: Vec<Complex64> = entries.into_iter().copied().collect();
    let complex = entries.iter().any(|z| z.im != 0.0);
    Value::from(entries.into_iter().map(|z| entry_value(z, complex)).collect::<Vec<_>>())
}

/// Canonical JSON text for `m`, terminated by a newline.
pub fn write_matrix_json(m: &DenseMatrix) -> String {
    let complex = is_complex(m);
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"cols\": {},", m.ncols());
    let _ = writeln!(out, "  \"complex\": {complex},");
    let _ = writeln!(out, "  \"data\": [");
    for i in 0..m.nrows() {
        let entries: Vec<String> = (0..m.ncols())
            .map(|j| {
                let z = m[(i, j)];
                if complex {
                    format!("[{}, {}]", format_float(z.re), format_float(z.im))
                } else {
                    format_float(z.re)
                }
            })
            .collect();
        let sep = if i + 1 < m.nrows() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", entries.join(", "));
    }
    let _ = writeln!(out, "  ],");
    let _ = writeln!(out, "  \"rows\": {}", m.nrows());
    let _ = writeln!(out, "}}");
    out
}
