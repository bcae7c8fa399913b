//! File formats: dense matrices as JSON or whitespace/comma separated text,
//! and numeric series as CSV.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

/// Accepted on input: the full object or a bare array of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Full(MatrixJson),
    Rows(Vec<Vec<f64>>),
}

impl MatrixInput {
    fn into_json(self) -> Result<MatrixJson> {
        match self {
            Self::Full(m) => Ok(m),
            Self::Rows(data) => {
                let cols = data.first().map_or(0, Vec::len);
                if data.is_empty() || cols == 0 {
                    return Err(Error::Parse("matrix has no entries".into()));
                }
                Ok(MatrixJson {
                    rows: data.len(),
                    cols,
                    data,
                })
            }
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data: self.to_rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixInput::deserialize(deserializer)?;
        raw.into_json().and_then(matrix_from_json).map_err(D::Error::custom)
    }
}

fn matrix_from_json(raw: MatrixJson) -> Result<Matrix> {
    if raw.data.len() != raw.rows {
        return Err(Error::Parse(format!(
            "\"rows\" is {} but data has {} rows",
            raw.rows,
            raw.data.len()
        )));
    }
    if let Some((i, row)) = raw.data.iter().enumerate().find(|(_, r)| r.len() != raw.cols) {
        return Err(Error::Parse(format!(
            "row {i} has {} entries, expected {}",
            row.len(),
            raw.cols
        )));
    }
    Matrix::new(raw.rows, raw.cols, raw.data.into_iter().flatten().collect())
}

/// Parses a matrix from JSON (`{"rows", "cols", "data"}` or `[[...], ...]`) or from
/// text with one row per line and entries separated by whitespace or commas.
/// Lines starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let raw: MatrixInput =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        return matrix_from_json(raw.into_json()?);
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {t:?}", lineno + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no matrix rows found".into()));
    }
    let cols = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::Parse(format!(
            "row {} has {} entries, expected {cols}",
            i + 1,
            rows[i].len()
        )));
    }
    let r = rows.len();
    Matrix::new(r, cols, rows.into_iter().flatten().collect())
}

/// Parses a plain list of numbers (one per line, or separated by commas/whitespace).
/// A first line that does not parse is treated as a header.
pub fn parse_sequence(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|t| !t.is_empty())
            .collect();
        let parsed: std::result::Result<Vec<f64>, _> = tokens.iter().map(|t| t.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parse(format!("line {}: non-finite value", lineno + 1)));
                }
                // two columns are read as (index, value)
                if values.len() == 2 && tokens.len() == 2 {
                    out.push(values[1]);
                } else {
                    out.extend(values);
                }
            }
            Err(_) if out.is_empty() => continue,
            Err(_) => return Err(Error::Parse(format!("line {}: bad number", lineno + 1))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty sequence".into()));
    }
    Ok(out)
}

/// 17 significant digits, enough to reproduce every `f64` exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per line, entries separated by single spaces.
pub fn format_matrix_text(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| format_f64(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// CSV with a header line; every row is `t, values...`.
pub fn format_series_csv(header: &[&str], rows: &[(f64, Vec<f64>)]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for (t, values) in rows {
        out.push_str(&format_f64(*t));
        for v in values {
            out.push(',');
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    out
}
