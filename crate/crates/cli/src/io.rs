//! Curve matrices as CSV: a header of grid abscissae, then one row per curve
//! holding an id and its values.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use banddepth::{validate_sample, Curve, FunctionalSample, Grid};

use crate::error::{CliError, ParseError, Result};

/// Shortest decimal form that reads back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x}")
}

pub fn read_curves(path: &Path) -> Result<FunctionalSample> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_curves(file, &path.display().to_string())
}

/// Parses a curve CSV; `source` names the input in error messages.
pub fn parse_curves<R: Read>(reader: R, source: &str) -> Result<FunctionalSample> {
    let err = |row: usize, col: Option<usize>, message: String| ParseError {
        path: source.to_string(),
        row,
        col,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| err(1, None, e.to_string()))?,
        None => return Err(err(1, None, "empty file".into()).into()),
    };
    let mut abscissae = Vec::with_capacity(header.len().saturating_sub(1));
    for (c, cell) in header.iter().enumerate().skip(1) {
        let t = cell
            .parse::<f64>()
            .map_err(|_| err(1, Some(c + 1), format!("abscissa {cell:?} is not a number")))?;
        abscissae.push(t);
    }
    let grid = Grid::new(abscissae)?;

    let mut ids = Vec::new();
    let mut curves = Vec::new();
    for (r, rec) in records.enumerate() {
        let row = r + 2;
        let rec = rec.map_err(|e| err(row, None, e.to_string()))?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != grid.len() + 1 {
            return Err(err(
                row,
                None,
                format!("expected {} fields, found {}", grid.len() + 1, rec.len()),
            )
            .into());
        }
        let mut values = Vec::with_capacity(grid.len());
        for (c, cell) in rec.iter().enumerate().skip(1) {
            let y = cell
                .parse::<f64>()
                .map_err(|_| err(row, Some(c + 1), format!("value {cell:?} is not a number")))?;
            values.push(y);
        }
        ids.push(rec[0].to_string());
        curves.push(Curve::new(values));
    }
    Ok(validate_sample(FunctionalSample::with_ids(
        grid, curves, ids,
    )?)?)
}

fn header_line(grid: &Grid) -> String {
    let mut line = String::from("id");
    for &t in grid.points() {
        line.push(',');
        line.push_str(&fmt_num(t));
    }
    line.push('\n');
    line
}

fn curve_line(id: &str, curve: &Curve) -> String {
    let mut line = id.to_string();
    for &y in curve.values() {
        line.push(',');
        line.push_str(&fmt_num(y));
    }
    line.push('\n');
    line
}

pub fn curves_csv(sample: &FunctionalSample) -> String {
    let mut out = header_line(sample.grid());
    for (id, c) in sample.ids().iter().zip(sample.curves()) {
        out.push_str(&curve_line(id, c));
    }
    out
}

/// A single named curve on `grid` in the curve CSV layout.
pub fn single_curve_csv(grid: &Grid, id: &str, curve: &Curve) -> String {
    header_line(grid) + &curve_line(id, curve)
}

pub fn write_curves<W: Write>(mut w: W, sample: &FunctionalSample) -> std::io::Result<()> {
    w.write_all(curves_csv(sample).as_bytes())
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}
