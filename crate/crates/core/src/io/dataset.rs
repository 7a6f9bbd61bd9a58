//! Delimited-text datasets. Rows are examples; in labeled mode the first
//! column is an integer class label. A header row is detected by attempting
//! to parse the first record.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

/// Load a numeric matrix. A non-numeric first row is skipped as a header.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let records = read_records(path.as_ref())?;
    let mut rows = Vec::with_capacity(records.len());
    for (line, fields) in &records {
        let mut row = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            row.push(parse_value(field, *line, col)?);
        }
        rows.push((*line, row));
    }
    build_matrix(rows)
}

/// Load a labeled dataset: first column integer labels, remaining columns
/// the feature matrix.
pub fn load_labeled(path: impl AsRef<Path>) -> Result<(Array2<f64>, Vec<usize>)> {
    let records = read_records(path.as_ref())?;
    let mut labels = Vec::with_capacity(records.len());
    let mut rows = Vec::with_capacity(records.len());
    for (line, fields) in &records {
        if fields.len() < 2 {
            return Err(Error::ParseError {
                line: *line,
                message: "labeled rows need a label plus at least one value".into(),
            });
        }
        let label: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::LabelColumnMissing { line: *line })?;
        labels.push(label);
        let mut row = Vec::with_capacity(fields.len() - 1);
        for (col, field) in fields.iter().enumerate().skip(1) {
            row.push(parse_value(field, *line, col)?);
        }
        rows.push((*line, row));
    }
    let matrix = build_matrix(rows)?;
    Ok((matrix, labels))
}

/// Write a matrix as comma-separated rows at full precision (17 significant
/// digits), no header.
pub fn save_matrix(path: impl AsRef<Path>, a: ArrayView2<'_, f64>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path.as_ref())?);
    for row in a.rows() {
        write_row(&mut out, None, row.iter())?;
    }
    out.flush()?;
    Ok(())
}

/// Write a labeled dataset: integer label first, then the feature values.
pub fn save_labeled(
    path: impl AsRef<Path>,
    x: ArrayView2<'_, f64>,
    labels: &[usize],
) -> Result<()> {
    if labels.len() != x.nrows() {
        return Err(Error::dim(format!(
            "{} labels for {} rows",
            labels.len(),
            x.nrows()
        )));
    }
    let mut out = BufWriter::new(File::create(path.as_ref())?);
    for (row, &label) in x.rows().into_iter().zip(labels) {
        write_row(&mut out, Some(label), row.iter())?;
    }
    out.flush()?;
    Ok(())
}

fn write_row<'a, W: Write>(
    out: &mut W,
    label: Option<usize>,
    values: impl Iterator<Item = &'a f64>,
) -> Result<()> {
    let mut first = true;
    if let Some(l) = label {
        write!(out, "{l}")?;
        first = false;
    }
    for v in values {
        if first {
            write!(out, "{v:.16e}")?;
            first = false;
        } else {
            write!(out, ",{v:.16e}")?;
        }
    }
    writeln!(out)?;
    Ok(())
}

/// Read all records, skipping a header row when the first record contains a
/// field that does not parse as a number. Returns (1-based line, fields).
fn read_records(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::FileNotFound(path.to_path_buf()),
            _ => Error::ParseError {
                line: 0,
                message: e.to_string(),
            },
        })?;
    let mut records = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| Error::ParseError {
            line,
            message: e.to_string(),
        })?;
        let fields: Vec<String> = record.iter().map(|f| f.to_string()).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        records.push((line, fields));
    }
    if records.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let header = records[0]
        .1
        .iter()
        .any(|f| f.parse::<f64>().is_err() && f.parse::<i64>().is_err());
    if header {
        records.remove(0);
        if records.is_empty() {
            return Err(Error::EmptyMatrix);
        }
    }
    Ok(records)
}

fn parse_value(field: &str, line: usize, col: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::ParseError {
        line,
        message: format!("field {} ({field:?}) is not a number", col + 1),
    })?;
    if !v.is_finite() {
        return Err(Error::ParseError {
            line,
            message: format!("field {} ({field:?}) is not finite", col + 1),
        });
    }
    Ok(v)
}

fn build_matrix(rows: Vec<(usize, Vec<f64>)>) -> Result<Array2<f64>> {
    let width = rows[0].1.len();
    if width == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut data = Vec::with_capacity(rows.len() * width);
    let height = rows.len();
    for (line, row) in rows {
        if row.len() != width {
            return Err(Error::ParseError {
                line,
                message: format!("row has {} values, expected {width}", row.len()),
            });
        }
        data.extend(row);
    }
    Ok(Array2::from_shape_vec((height, width), data).expect("rectangular by construction"))
}
