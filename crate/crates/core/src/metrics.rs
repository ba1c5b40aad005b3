//! Selection and prediction metrics and their aggregation across replications.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Selected and true index sets over `p` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionOutcome {
    selected: BTreeSet<usize>,
    truth: BTreeSet<usize>,
    p: usize,
}

impl SelectionOutcome {
    pub fn new(
        selected: impl IntoIterator<Item = usize>,
        truth: impl IntoIterator<Item = usize>,
        p: usize,
    ) -> Result<Self> {
        let selected: BTreeSet<usize> = selected.into_iter().collect();
        let truth: BTreeSet<usize> = truth.into_iter().collect();
        if let Some(&j) = selected.iter().chain(&truth).find(|&&j| j >= p) {
            return Err(Error::Metrics(format!("index {j} out of range for p = {p}")));
        }
        Ok(Self { selected, truth, p })
    }

    /// Build from coefficient vectors: nonzero entries are selected / true.
    pub fn from_coefficients(beta_hat: &[f64], beta_true: &[f64]) -> Result<Self> {
        if beta_hat.len() != beta_true.len() {
            return Err(Error::DimensionMismatch { expected: beta_true.len(), got: beta_hat.len() });
        }
        let nz = |b: &[f64]| b.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, _)| j).collect::<Vec<_>>();
        Self::new(nz(beta_hat), nz(beta_true), beta_true.len())
    }

    pub fn selected(&self) -> &BTreeSet<usize> {
        &self.selected
    }

    pub fn truth(&self) -> &BTreeSet<usize> {
        &self.truth
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn false_selections(&self) -> usize {
        self.selected.difference(&self.truth).count()
    }

    pub fn true_selections(&self) -> usize {
        self.selected.intersection(&self.truth).count()
    }

    pub fn size(&self) -> usize {
        self.selected.len()
    }

    pub fn exact_recovery(&self) -> bool {
        self.selected == self.truth
    }
}

/// `|Â \ A°| / max(|Â|, 1)`.
pub fn fdr(outcome: &SelectionOutcome) -> f64 {
    outcome.false_selections() as f64 / outcome.size().max(1) as f64
}

/// `|Â ∩ A°| / max(|A°|, 1)`.
pub fn tdr(outcome: &SelectionOutcome) -> f64 {
    outcome.true_selections() as f64 / outcome.truth.len().max(1) as f64
}

/// 1 if any false selection was made.
pub fn fwer_indicator(outcome: &SelectionOutcome) -> u8 {
    u8::from(outcome.false_selections() > 0)
}

/// Mean squared prediction error of `offset + X β̂` on a test set.
pub fn mspe(beta_hat: &[f64], offset: f64, test_x: &DenseMatrix, test_y: &[f64]) -> Result<f64> {
    let n = test_x.nrows();
    if n == 0 {
        return Err(Error::Metrics("empty test set".into()));
    }
    if test_y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: test_y.len() });
    }
    if beta_hat.len() != test_x.ncols() {
        return Err(Error::DimensionMismatch { expected: test_x.ncols(), got: beta_hat.len() });
    }
    let mut pred = vec![offset; n];
    for (j, &b) in beta_hat.iter().enumerate() {
        if b != 0.0 {
            crate::linalg::axpy(b, test_x.col(j), &mut pred);
        }
    }
    let sse: f64 = test_y.iter().zip(&pred).map(|(y, f)| (y - f) * (y - f)).sum();
    Ok(sse / n as f64)
}

/// Root mean squared prediction error of `X β̂` on a test set.
pub fn rmse(beta_hat: &[f64], test_x: &DenseMatrix, test_y: &[f64]) -> Result<f64> {
    mspe(beta_hat, 0.0, test_x, test_y).map(f64::sqrt)
}

/// Average of per-split MSPE values.
pub fn mean_mspe(per_split: &[f64]) -> Result<f64> {
    if per_split.is_empty() {
        return Err(Error::Metrics("no splits".into()));
    }
    Ok(per_split.iter().sum::<f64>() / per_split.len() as f64)
}

/// Metrics of one fit at one grid index of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub lambda: f64,
    pub fdr: f64,
    pub tdr: f64,
    pub size: f64,
    pub rmse: f64,
}

/// Mean and standard error of one quantity; `se` is absent with fewer than
/// two observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub se: Option<f64>,
    pub n: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let se = (n > 1).then(|| {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        Some(Self { mean, se, n })
    }
}

/// Aggregated metrics at one grid index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: String,
    pub grid_index: usize,
    pub lambda: Summary,
    pub fdr: Summary,
    pub tdr: Summary,
    pub size: Summary,
    pub rmse: Summary,
}

/// Aggregated selection and prediction curves for one or more methods.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub n_reps: usize,
    pub rows: Vec<ReportRow>,
}

/// Aggregate per-replication curves of one method by grid index.
///
/// `None` marks a failed replication and is skipped. Surviving curves must
/// share one length. Grid indices where no replication survived produce no
/// row.
pub fn aggregate(method: &str, curves: &[Option<Vec<CurvePoint>>]) -> Result<SelectionReport> {
    let present: Vec<&Vec<CurvePoint>> = curves.iter().flatten().collect();
    let len = present.first().map_or(0, |c| c.len());
    if let Some(bad) = present.iter().find(|c| c.len() != len) {
        return Err(Error::Metrics(format!("curve lengths differ: {len} vs {}", bad.len())));
    }
    let mut rows = Vec::with_capacity(len);
    for g in 0..len {
        let col = |f: fn(&CurvePoint) -> f64| present.iter().map(|c| f(&c[g])).collect::<Vec<f64>>();
        let s = |f: fn(&CurvePoint) -> f64| Summary::of(&col(f)).expect("nonempty");
        rows.push(ReportRow {
            method: method.to_string(),
            grid_index: g,
            lambda: s(|c| c.lambda),
            fdr: s(|c| c.fdr),
            tdr: s(|c| c.tdr),
            size: s(|c| c.size),
            rmse: s(|c| c.rmse),
        });
    }
    Ok(SelectionReport { n_reps: curves.len(), rows })
}

impl SelectionReport {
    /// Concatenate reports; rows end up sorted by method then grid index.
    pub fn merge(reports: impl IntoIterator<Item = SelectionReport>) -> Self {
        let mut out = SelectionReport::default();
        for r in reports {
            out.n_reps = out.n_reps.max(r.n_reps);
            out.rows.extend(r.rows);
        }
        out.rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.grid_index.cmp(&b.grid_index)));
        out
    }

    pub fn methods(&self) -> Vec<&str> {
        let mut m: Vec<&str> = self.rows.iter().map(|r| r.method.as_str()).collect();
        m.dedup();
        m
    }

    /// Rows of one method in grid order.
    pub fn curve(&self, method: &str) -> Vec<&ReportRow> {
        let mut rows: Vec<&ReportRow> = self.rows.iter().filter(|r| r.method == method).collect();
        rows.sort_by_key(|r| r.grid_index);
        rows
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "method", "grid_index", "lambda_mean", "fdr_mean", "fdr_se", "tdr_mean", "tdr_se", "size_mean",
        "rmse_mean", "rmse_se",
    ];

    /// Write the report as CSV. Absent standard errors are empty fields.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(Self::CSV_HEADER)?;
        let se = |s: &Summary| s.se.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            wr.write_record([
                r.method.clone(),
                r.grid_index.to_string(),
                r.lambda.mean.to_string(),
                r.fdr.mean.to_string(),
                se(&r.fdr),
                r.tdr.mean.to_string(),
                se(&r.tdr),
                r.size.mean.to_string(),
                r.rmse.mean.to_string(),
                se(&r.rmse),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}
