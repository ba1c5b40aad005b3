use super::{fit, Algorithm, FitResult, Problem, SolverConfig};
use crate::error::{Error, Result};
use crate::penalty::PenaltySpec;
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct PathConfig {
    pub n_lambda: usize,
    /// `None` picks 0.05 when `p > n` and 0.001 otherwise.
    pub lambda_min_ratio: Option<f64>,
    /// Explicit decreasing grid; overrides `n_lambda` and the ratio.
    pub lambdas: Option<Vec<f64>>,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self { n_lambda: 100, lambda_min_ratio: None, lambdas: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub lambdas: Vec<f64>,
    pub fits: Vec<FitResult>,
    /// `τ` of the template, fixed along the path.
    pub tau: Option<f64>,
    pub algorithm: Algorithm,
}

pub fn default_lambda_min_ratio(n: usize, p: usize) -> f64 {
    if p > n {
        0.05
    } else {
        0.001
    }
}

/// Geometric grid from `lambda_max` down to `ratio * lambda_max`.
pub fn lambda_grid(lambda_max: f64, n_lambda: usize, ratio: f64) -> Result<Vec<f64>> {
    if n_lambda == 0 {
        return Err(Error::InvalidConfig("n_lambda must be at least 1".into()));
    }
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::InvalidProblem(format!("lambda_max must be positive, got {lambda_max}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidConfig(format!("lambda_min_ratio must lie in (0, 1), got {ratio}")));
    }
    if n_lambda == 1 {
        return Ok(vec![lambda_max]);
    }
    let step = ratio.ln() / (n_lambda - 1) as f64;
    Ok((0..n_lambda).map(|i| lambda_max * (step * i as f64).exp()).collect())
}

/// The `λ` grid used by [`fit_path`].
///
/// A geometric grid of selection thresholds from `λ_max = max_j |x_j' y|` down
/// to `ratio * λ_max` is mapped to penalty levels. For coordinate descent with
/// a TWIN penalty each `λ` is the level at which the exact univariate
/// threshold selects at that value, so the first fit is empty; this coincides
/// with the threshold itself whenever `λ <= τ` and for every other penalty.
/// MCLLA starts from the weighted-ℓ1 surrogate at zero, whose threshold is `λ`.
pub fn path_lambdas(problem: &Problem, template: &PenaltySpec, path: &PathConfig, algorithm: Algorithm) -> Result<Vec<f64>> {
    if let Some(l) = &path.lambdas {
        if l.is_empty() || l.windows(2).any(|w| !(w[1] < w[0])) || l.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("explicit lambda grid must be positive and strictly decreasing".into()));
        }
        return Ok(l.clone());
    }
    let ratio = path.lambda_min_ratio.unwrap_or_else(|| default_lambda_min_ratio(problem.n(), problem.p()));
    let thresholds = lambda_grid(problem.lambda_max(), path.n_lambda, ratio)?;
    if !(template.is_twin() && algorithm == Algorithm::Cd) {
        return Ok(thresholds);
    }
    let mut lambdas = Vec::with_capacity(thresholds.len());
    for (i, &t) in thresholds.iter().enumerate() {
        // Nudge the first level so the largest |x_j' y| is strictly inside the dead zone.
        let t = if i == 0 { t * (1.0 + 1e-9) } else { t };
        let lambda = template.with_selection_threshold(t)?.lambda();
        if lambdas.last().is_some_and(|&prev: &f64| !(lambda < prev)) {
            return Err(Error::InvalidConfig(format!("lambda grid collapsed at index {i}")));
        }
        lambdas.push(lambda);
    }
    Ok(lambdas)
}

/// Regularization path with warm starts. `template` supplies the penalty
/// family and `τ`; its `λ` is ignored.
///
/// Each fit uses its own seed derived from `config.rng_seed` and the grid
/// index.
pub fn fit_path(
    problem: &Problem,
    template: &PenaltySpec,
    path: &PathConfig,
    config: &SolverConfig,
    algorithm: Algorithm,
) -> Result<PathResult> {
    problem.check_standardized()?;
    let lambdas = path_lambdas(problem, template, path, algorithm)?;
    let mut fits: Vec<FitResult> = Vec::with_capacity(lambdas.len());
    for (i, &lambda) in lambdas.iter().enumerate() {
        let spec = template.with_lambda(lambda)?;
        let cfg = SolverConfig { rng_seed: derive_seed(config.rng_seed, i as u64), ..config.clone() };
        let warm = fits.last().map(|f| f.beta.as_slice());
        fits.push(fit(problem, &spec, &cfg, algorithm, warm)?);
    }
    Ok(PathResult { lambdas, fits, tau: template.tau(), algorithm })
}
