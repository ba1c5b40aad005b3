//! CSV ingestion of response-first data files.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::solver::Problem;

/// Read a response-first CSV with a header row into an unstandardized
/// problem, returning the header names of the response and predictors.
pub fn read_labeled_csv(path: &Path) -> Result<(Problem, Vec<String>)> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(BufReader::new(file));
    let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let width = names.len();
    if width < 2 {
        return Err(Error::Parse(format!("{}: need a response column and at least one predictor", path.display())));
    }
    let mut y = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); width - 1];
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(Error::Parse(format!("{}: row {} has {} fields, expected {width}", path.display(), row + 2, rec.len())));
        }
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Parse(format!("{}: row {}, column {}: not a number: {field:?}", path.display(), row + 2, j + 1))
            })?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("{}: row {}, column {}: non-finite value", path.display(), row + 2, j + 1)));
            }
            if j == 0 { y.push(v) } else { cols[j - 1].push(v) }
        }
    }
    if y.is_empty() {
        return Err(Error::Parse(format!("{}: no data rows", path.display())));
    }
    let n = y.len();
    let x = DenseMatrix::from_column_major(n, width - 1, cols.concat())?;
    Ok((Problem::new(y, x)?, names))
}

/// [`read_labeled_csv`] without the names.
pub fn read_problem_csv(path: &Path) -> Result<Problem> {
    read_labeled_csv(path).map(|(p, _)| p)
}
