//! Minimal CSV I/O for point files, distance matrices, and coordinates.
//!
//! The formats are deliberately plain: comma separators, no quoting, no
//! escapes. Numbers are written with Rust's shortest round-trip
//! formatting, so a written file parses back to bit-identical floats and
//! diffs cleanly.

use crate::error::{usage, CliError, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Shortest representation that parses back to the same f64.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn parse_row(line: &str, path: &Path, row: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|cell| {
            cell.trim().parse::<f64>().map_err(|_| {
                CliError::Parse(format!(
                    "{}: row {}: '{}' is not a number",
                    path.display(),
                    row + 1,
                    cell.trim()
                ))
            })
        })
        .collect()
}

/// One point per row, comma-separated coordinates, no header.
pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(usage(format!("{}: points file contains no rows", path.display())));
    }
    let mut points = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        let row = parse_row(line, path, i)?;
        if let Some(first) = points.first() {
            let expected: &Vec<f64> = first;
            if row.len() != expected.len() {
                return Err(CliError::Parse(format!(
                    "{}: row {} has {} columns, expected {}",
                    path.display(),
                    i + 1,
                    row.len(),
                    expected.len()
                )));
            }
        }
        points.push(row);
    }
    Ok(points)
}

/// A square matrix, optionally preceded by a header row of labels. The
/// header is detected by the first row failing to parse as numbers.
pub fn read_matrix(path: &Path) -> Result<(Vec<Vec<f64>>, Option<Vec<String>>)> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(usage(format!("{}: matrix file contains no rows", path.display())));
    }
    let first_numeric = lines[0]
        .split(',')
        .all(|cell| cell.trim().parse::<f64>().is_ok());
    let (labels, data_lines) = if first_numeric {
        (None, &lines[..])
    } else {
        let labels: Vec<String> =
            lines[0].split(',').map(|c| c.trim().to_string()).collect();
        (Some(labels), &lines[1..])
    };
    let mut rows = Vec::with_capacity(data_lines.len());
    for (i, line) in data_lines.iter().enumerate() {
        rows.push(parse_row(line, path, i + usize::from(labels.is_some()))?);
    }
    if let Some(labels) = &labels {
        if labels.len() != rows.len() {
            return Err(CliError::Parse(format!(
                "{}: header names {} columns but there are {} data rows",
                path.display(),
                labels.len(),
                rows.len()
            )));
        }
    }
    Ok((rows, labels))
}

/// Square matrix with a header row of labels.
pub fn write_matrix(path: &Path, labels: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&labels.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Coordinates with a label column, for external plotting.
pub fn write_coordinates(path: &Path, labels: &[String], coords: &[Vec<f64>]) -> Result<()> {
    let rank = coords.first().map(Vec::len).unwrap_or(0);
    let mut out = String::from("label");
    for k in 0..rank {
        let _ = write!(out, ",c{k}");
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(coords.iter()) {
        out.push_str(label);
        for v in row {
            out.push(',');
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
