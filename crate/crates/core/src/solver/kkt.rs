use super::Problem;
use crate::error::Result;
use crate::linalg::dot;
use crate::penalty::PenaltySpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktCheck {
    pub max_violation: f64,
    pub pass: bool,
}

/// First-order conditions of the penalized objective at `beta`:
///
/// * `β_j ≠ 0`: `x_j'(y - Xβ) = sgn(β_j) P'(|β_j|)`
/// * `β_j = 0`: `|x_j'(y - Xβ)| <= λ`
pub fn kkt_check(problem: &Problem, spec: &PenaltySpec, beta: &[f64], tol: f64) -> Result<KktCheck> {
    problem.check_beta(beta)?;
    let r = problem.residual(beta);
    let lambda = spec.lambda();
    let max_violation = (0..problem.p())
        .map(|j| {
            let g = dot(problem.x().col(j), &r);
            let b = beta[j];
            if b != 0.0 {
                (g - b.signum() * spec.derivative_abs(b)).abs()
            } else {
                (g.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    Ok(KktCheck { max_violation, pass: max_violation <= tol })
}
