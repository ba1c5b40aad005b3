use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::penalty::PenaltySpec;
use crate::solver::{fit, Algorithm, Problem, SolverConfig};

/// Residual-based noise estimate from a preliminary Lasso.
///
/// Start from the response standard deviation; twice, fit the Lasso at
/// `σ̂ sqrt(2 log p)` on the centered, standardized problem and set
/// `σ̂ = sqrt(RSS / (n - |Â|))`.
pub fn estimate_sigma(problem: &Problem, config: &SolverConfig) -> Result<f64> {
    let prob = problem.center().standardize()?;
    let n = prob.n();
    if n < 2 {
        return Err(Error::Tuning("noise estimate needs n >= 2".into()));
    }
    let y = prob.y();
    let mut sigma = (dot(y, y) / (n - 1) as f64).sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Tuning("response has zero variance".into()));
    }
    let level = (2.0 * (prob.p().max(2) as f64).ln()).sqrt();
    let mut warm: Option<Vec<f64>> = None;
    for _ in 0..2 {
        let spec = PenaltySpec::lasso(sigma * level)?;
        let f = fit(&prob, &spec, config, Algorithm::Cd, warm.as_deref())?;
        let r = prob.residual(&f.beta);
        let dof = n.saturating_sub(f.model_size() + 1).max(1);
        sigma = (dot(&r, &r) / dof as f64).sqrt();
        if !(sigma > 0.0) {
            return Err(Error::Tuning("preliminary fit interpolates the response; sigma estimate is zero".into()));
        }
        warm = Some(f.beta);
    }
    Ok(sigma)
}
