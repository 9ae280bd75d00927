//! CSV ingestion with role-specific validation.

use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{CliError, CliResult};

/// What a CSV file is expected to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Design,
    /// A single column.
    Response,
    /// Square and symmetric within `1e-8`.
    Covariance,
    /// Entries in `{0, 1}` or `{−1, 1}`.
    BinaryMatrix,
    /// Arbitrary labels, encoded per column.
    CategoricalMatrix,
}

/// A loaded table.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    /// Numeric values, or class codes for categorical data.
    pub values: Array2<f64>,
    /// Per column, the sorted class labels (categorical role only). Columns
    /// whose labels are all numeric are sorted numerically.
    pub levels: Option<Vec<Vec<String>>>,
}

impl Dataset {
    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    /// The single column of a response table.
    pub fn column_vector(&self) -> Array1<f64> {
        self.values.column(0).to_owned()
    }

    /// Class codes as integers.
    pub fn codes(&self) -> Array2<i64> {
        self.values.mapv(|v| v as i64)
    }
}

fn loc(path: &Path, row: usize, col: usize) -> String {
    format!("{}: row {}, column {}", path.display(), row, col)
}

/// Reads `path` as comma-separated values. Rows and columns in error
/// messages are 1-based and count the header line.
pub fn load_csv(path: &Path, role: Role, header: bool) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Data(format!("{}: line {}: {e}", path.display(), i + 1)))?;
        if rec.iter().all(|c| c.is_empty()) {
            continue;
        }
        records.push((i + 1, rec));
    }
    let mut rows = records.into_iter();
    let names: Option<Vec<String>> = if header {
        rows.next().map(|(_, r)| r.iter().map(str::to_string).collect())
    } else {
        None
    };
    let rows: Vec<_> = rows.collect();
    let width = names
        .as_ref()
        .map(Vec::len)
        .or_else(|| rows.first().map(|(_, r)| r.len()))
        .ok_or_else(|| CliError::Data(format!("{}: no data rows", path.display())))?;
    if rows.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    for (line, r) in &rows {
        if r.len() != width {
            return Err(CliError::Data(format!(
                "{}: row {line} has {} fields, expected {width}",
                path.display(),
                r.len()
            )));
        }
    }
    let names = names.unwrap_or_else(|| (1..=width).map(|j| format!("x{j}")).collect());
    let n = rows.len();

    if role == Role::CategoricalMatrix {
        let mut levels = Vec::with_capacity(width);
        let mut values = Array2::zeros((n, width));
        for j in 0..width {
            let mut labels: Vec<&str> = rows.iter().map(|(_, r)| &r[j]).collect();
            if let Some((line, _)) = rows.iter().find(|(_, r)| r[j].is_empty()) {
                return Err(CliError::Data(format!("{}: empty label", loc(path, *line, j + 1))));
            }
            let numeric: Option<Vec<f64>> = labels.iter().map(|s| s.parse::<f64>().ok()).collect();
            labels.sort_unstable();
            labels.dedup();
            if numeric.is_some() {
                labels.sort_by(|a, b| {
                    a.parse::<f64>()
                        .unwrap()
                        .partial_cmp(&b.parse::<f64>().unwrap())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            }
            for (i, (_, r)) in rows.iter().enumerate() {
                values[[i, j]] = labels.iter().position(|l| *l == &r[j]).unwrap() as f64;
            }
            levels.push(labels.into_iter().map(str::to_string).collect());
        }
        return Ok(Dataset {
            names,
            values,
            levels: Some(levels),
        });
    }

    let mut values = Array2::zeros((n, width));
    for (i, (line, r)) in rows.iter().enumerate() {
        for (j, cell) in r.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!("{}: non-numeric value {cell:?}", loc(path, *line, j + 1)))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!("{}: non-finite value", loc(path, *line, j + 1))));
            }
            if role == Role::BinaryMatrix && !(v == 0.0 || v == 1.0 || v == -1.0) {
                return Err(CliError::Data(format!(
                    "{}: value {cell} is not binary (expected 0/1 or -1/1)",
                    loc(path, *line, j + 1)
                )));
            }
            values[[i, j]] = v;
        }
    }
    match role {
        Role::Response if width != 1 => {
            return Err(CliError::Data(format!(
                "{}: response must have one column, found {width}",
                path.display()
            )));
        }
        Role::Covariance => {
            if n != width {
                return Err(CliError::Data(format!(
                    "{}: covariance must be square, found {n}×{width}",
                    path.display()
                )));
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    let (u, v) = (values[[a, b]], values[[b, a]]);
                    if (u - v).abs() > 1e-8 * u.abs().max(v.abs()).max(1.0) {
                        let line = rows[a].0;
                        return Err(CliError::Data(format!(
                            "{}: covariance is not symmetric ({u} vs {v} at row {}, column {})",
                            loc(path, line, b + 1),
                            rows[b].0,
                            a + 1
                        )));
                    }
                }
            }
        }
        _ => {}
    }
    Ok(Dataset {
        names,
        values,
        levels: None,
    })
}
