use super::cd::Engine;
use super::{kkt_check, Algorithm, FitResult, Problem, SolverConfig};
use crate::error::{Error, Result};
use crate::penalty::{soft_threshold, PenaltySpec};

/// Mixed coordinate local linear approximation.
///
/// Outer iteration: weights `w_j = P'(|β_j|)` (with `w_j = λ` at zero).
/// Inner iteration: coordinate descent on `½‖y - Xβ‖² + Σ w_j |β_j|`, where a
/// negative weight produces the enlargement update `sgn(z)(|z| + |w_j|)`.
/// The outer loop stops after `lla_outer_iters` refreshes or once the sign
/// pattern of `β` repeats.
///
/// The result is flagged `converged` only when the last inner solve
/// converged, the sign pattern stabilized and the exact-problem KKT
/// conditions hold at `kkt_tol`.
pub fn fit_mclla(
    problem: &Problem,
    spec: &PenaltySpec,
    config: &SolverConfig,
    warm_start: Option<&[f64]>,
) -> Result<FitResult> {
    if !spec.is_twin() {
        return Err(Error::Unsupported("MCLLA with non-TWIN penalties"));
    }
    config.validate()?;
    problem.check_standardized()?;
    let mut engine = Engine::new(problem, config, warm_start)?;
    let mut sweeps = 0;
    let mut inner_converged = false;
    let mut signs_stable = false;
    for _ in 0..config.lla_outer_iters {
        let before: Vec<i8> = engine.beta().iter().map(|b| sign_of(*b)).collect();
        let weights: Vec<f64> = engine.beta().iter().map(|b| spec.derivative_abs(*b)).collect();
        let mut update = |j: usize, z: f64, old: f64| weighted_update(z, weights[j], old);
        let (s, c) = engine.run(&mut update, spec)?;
        sweeps += s;
        inner_converged = c;
        signs_stable = engine.beta().iter().map(|b| sign_of(*b)).eq(before.into_iter());
        if signs_stable {
            break;
        }
    }
    let beta = engine.beta().to_vec();
    let kkt_ok = kkt_check(problem, spec, &beta, config.kkt_tol)?.pass;
    let converged = inner_converged && signs_stable && kkt_ok;
    let trace = std::mem::take(&mut engine.trace);
    FitResult::assemble(problem, *spec, Algorithm::Mclla, beta, sweeps, converged, trace, config.kkt_tol)
}

fn sign_of(b: f64) -> i8 {
    if b > 0.0 {
        1
    } else if b < 0.0 {
        -1
    } else {
        0
    }
}

/// Minimizer of `½(z - θ)² + w |θ|` for any real `w`.
fn weighted_update(z: f64, w: f64, old: f64) -> f64 {
    if w >= 0.0 {
        soft_threshold(z, w)
    } else if z == 0.0 {
        // Both signs are optimal; keep the current one.
        let s = if old < 0.0 { -1.0 } else { 1.0 };
        s * -w
    } else {
        z.signum() * (z.abs() - w)
    }
}
