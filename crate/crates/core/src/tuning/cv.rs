use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::axpy;
use crate::penalty::PenaltySpec;
use crate::rng::{derive_seed, mix64};
use crate::solver::{fit_path, path_lambdas, Algorithm, PathConfig, Problem, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    /// Seed of the fold assignment.
    pub seed: u64,
    pub path: PathConfig,
    pub solver: SolverConfig,
    pub algorithm: Algorithm,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self { folds: 10, seed: 0, path: PathConfig::default(), solver: SolverConfig::default(), algorithm: Algorithm::Cd }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    /// Grid on the scale of the full standardized problem.
    pub lambdas: Vec<f64>,
    /// Pooled held-out mean squared prediction error per `λ`.
    pub cv_curve: Vec<f64>,
    /// Standard error of the per-fold mean squared errors.
    pub cv_se: Vec<f64>,
    pub best_index: usize,
    pub best_lambda: f64,
    /// Fold of each input row.
    pub fold_of: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Row order that depends only on row contents and `seed`.
fn canonical_order(problem: &Problem, seed: u64) -> Vec<usize> {
    let x = problem.x();
    let row_bits = |i: usize| -> Vec<u64> {
        std::iter::once(problem.y()[i]).chain((0..problem.p()).map(|j| x.get(i, j))).map(f64::to_bits).collect()
    };
    let mut keyed: Vec<(u64, Vec<u64>, usize)> = (0..problem.n())
        .map(|i| {
            let bits = row_bits(i);
            let h = bits.iter().fold(mix64(seed), |h, b| mix64(h ^ b));
            (h, bits, i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    keyed.into_iter().map(|k| k.2).collect()
}

struct FoldOutcome {
    sse: Vec<f64>,
    n_test: usize,
    warning: Option<String>,
}

/// K-fold cross-validation of a penalized path.
///
/// `problem` is raw (uncentered, unstandardized). The grid comes from the centered,
/// standardized full problem; `template`'s `τ` is on that scale. Each
/// training fold is re-centered and re-standardized, and `λ`, `τ` are scaled
/// by `sqrt(n_train / n)` to keep the same per-observation meaning. Folds are
/// assigned from a seeded hash of row contents, so the result does not depend
/// on the order of the rows. The best index minimizes the curve; ties go to
/// the larger `λ`.
pub fn cross_validate(problem: &Problem, template: &PenaltySpec, cfg: &CvConfig) -> Result<CvResult> {
    let n = problem.n();
    let k = cfg.folds;
    if k < 2 || k > n {
        return Err(Error::Tuning(format!("need 2 <= folds <= n, got folds={k}, n={n}")));
    }
    cfg.solver.validate()?;
    let order = canonical_order(problem, cfg.seed);
    let canon = problem.subset_rows(&order)?;
    let full = canon.center().standardize()?;
    let lambdas = path_lambdas(&full, template, &cfg.path, cfg.algorithm)?;

    let mut fold_of = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        fold_of[i] = r % k;
    }

    let run_fold = |f: usize| -> Result<FoldOutcome> {
        let train: Vec<usize> = (0..n).filter(|r| r % k != f).collect();
        let test: Vec<usize> = (0..n).filter(|r| r % k == f).collect();
        let raw = canon.subset_rows(&train)?;
        let ty = raw.y();
        let mean = ty.iter().sum::<f64>() / ty.len() as f64;
        let warning = ty
            .iter()
            .all(|v| *v == mean)
            .then(|| format!("fold {f}: training response has zero variance"));
        let tp = raw.center().standardize()?;
        let s = (train.len() as f64 / n as f64).sqrt();
        let fold_template = template.rescaled(s)?;
        let path = PathConfig { lambdas: Some(lambdas.iter().map(|l| l * s).collect()), ..cfg.path.clone() };
        let solver = SolverConfig { rng_seed: derive_seed(cfg.solver.rng_seed, f as u64), ..cfg.solver.clone() };
        let fits = fit_path(&tp, &fold_template, &path, &solver, cfg.algorithm)?;
        let test_rows = canon.x().select_rows(&test);
        let test_y: Vec<f64> = test.iter().map(|&r| canon.y()[r]).collect();
        let sse = fits
            .fits
            .iter()
            .map(|fit| {
                let beta = tp.to_original_scale(&fit.beta);
                let mut pred = vec![tp.intercept(&fit.beta); test.len()];
                for (j, &b) in beta.iter().enumerate() {
                    if b != 0.0 {
                        axpy(b, test_rows.col(j), &mut pred);
                    }
                }
                test_y.iter().zip(&pred).map(|(y, p)| (y - p) * (y - p)).sum()
            })
            .collect();
        Ok(FoldOutcome { sse, n_test: test.len(), warning })
    };
    let outcomes = (0..k).into_par_iter().map(run_fold).collect::<Result<Vec<_>>>()?;

    let m = lambdas.len();
    let mut cv_curve = vec![0.0; m];
    let mut cv_se = vec![0.0; m];
    for g in 0..m {
        let total: f64 = outcomes.iter().map(|o| o.sse[g]).sum();
        cv_curve[g] = total / n as f64;
        let per: Vec<f64> = outcomes.iter().map(|o| o.sse[g] / o.n_test as f64).collect();
        let mean = per.iter().sum::<f64>() / k as f64;
        let var = per.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64;
        cv_se[g] = (var / k as f64).sqrt();
    }
    let mut best_index = 0;
    for g in 1..m {
        if cv_curve[g] < cv_curve[best_index] {
            best_index = g;
        }
    }
    Ok(CvResult {
        best_lambda: lambdas[best_index],
        lambdas,
        cv_curve,
        cv_se,
        best_index,
        fold_of,
        warnings: outcomes.into_iter().filter_map(|o| o.warning).collect(),
    })
}
