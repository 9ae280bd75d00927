//! Artifact writers: `path.csv`, `path.json` and plain data tables.

use std::path::{Path, PathBuf};

use ndarray::{Array1, ArrayView2};

use crate::error::{CliError, CliResult};

/// One row per snapshot: time, unpenalized components, penalized
/// components. Numbers use the shortest representation that parses back to
/// the same `f64`.
pub fn write_path_csv(
    file: &Path,
    theta0_names: &[String],
    theta_names: &[String],
    times: &[f64],
    theta0: &[Array1<f64>],
    theta: &[Array1<f64>],
) -> CliResult<()> {
    let mut w = csv::Writer::from_path(file).map_err(csv_err)?;
    let mut header = vec!["t".to_string()];
    header.extend(theta0_names.iter().cloned());
    header.extend(theta_names.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..times.len() {
        let mut rec = Vec::with_capacity(header.len());
        rec.push(times[i].to_string());
        rec.extend(theta0[i].iter().map(f64::to_string));
        rec.extend(theta[i].iter().map(f64::to_string));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a `path.csv` back into its header and numeric rows.
pub fn read_path_csv(file: &Path) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(file).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|c| c.parse::<f64>().map_err(|_| CliError::Data(format!("bad number {c:?}"))))
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Writes a headerless numeric table.
pub fn write_matrix(file: &Path, m: ArrayView2<f64>) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(file)
        .map_err(csv_err)?;
    for row in m.rows() {
        w.write_record(row.iter().map(f64::to_string)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(file: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    s.push('\n');
    std::fs::write(file, s)?;
    Ok(())
}

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Data(e.to_string())
}
