use super::normal::normal_cdf_complement;
use crate::error::{Error, Result};
use crate::penalty::{PenaltySpec, DEFAULT_TWIN_B_H};

/// Number of `τ` values scanned by the calibration.
pub const TAU_GRID_LEN: usize = 32;

/// FWER target for an orthonormal design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTarget {
    pub alpha: f64,
    pub p: usize,
    pub sigma: f64,
}

impl CalibrationTarget {
    pub fn new(alpha: f64, p: usize, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Tuning(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if p == 0 {
            return Err(Error::Tuning("p must be positive".into()));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Tuning(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { alpha, p, sigma })
    }

    /// `σ Φ^{-1}(1 - α / 2p)`.
    pub fn gap(&self) -> Result<f64> {
        Ok(self.sigma * normal_cdf_complement(self.alpha / (2.0 * self.p as f64))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwinFamily {
    A,
    B { h: f64 },
}

impl TwinFamily {
    pub fn b() -> Self {
        Self::B { h: DEFAULT_TWIN_B_H }
    }

    pub fn spec(&self, lambda: f64, tau: f64) -> Result<PenaltySpec> {
        match *self {
            Self::A => PenaltySpec::twin_a(lambda, tau),
            Self::B { h } => PenaltySpec::twin_b(lambda, tau, h),
        }
    }
}

/// Logarithmic grid of [`TAU_GRID_LEN`] points over `[0.05, 20] · gap`.
pub fn tau_grid(gap: f64) -> Vec<f64> {
    let (lo, hi) = ((0.05 * gap).ln(), (20.0 * gap).ln());
    (0..TAU_GRID_LEN)
        .map(|i| (lo + (hi - lo) * i as f64 / (TAU_GRID_LEN - 1) as f64).exp())
        .collect()
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == rising { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

/// Every `(λ, τ)` on the `τ` grid with `min_gap = gap`.
///
/// For fixed `τ` the gap rises with `λ` up to its peak `τ` at `λ = τ` and
/// falls afterwards, so each `τ >= gap` contributes one root per side.
fn candidates(family: TwinFamily, gap: f64) -> Result<Vec<PenaltySpec>> {
    let mut out = Vec::new();
    for tau in tau_grid(gap) {
        let g = |lambda: f64| family.spec(lambda, tau).map(|s| s.min_gap() - gap).unwrap_or(f64::NAN);
        if g(tau) < 0.0 {
            continue;
        }
        out.push(family.spec(bisect(g, 0.0, tau, true), tau)?);
        let mut hi = 2.0 * tau;
        while g(hi) >= 0.0 {
            hi *= 2.0;
        }
        out.push(family.spec(bisect(g, tau, hi, false), tau)?);
    }
    Ok(out)
}

fn order_key(s: &PenaltySpec) -> (f64, f64) {
    (s.lambda(), s.tau().unwrap_or(0.0))
}

fn no_root(gap: f64) -> Error {
    let g = tau_grid(gap);
    Error::Tuning(format!(
        "no (lambda, tau) with min_gap = {gap} on tau grid [{}, {}]",
        g[0],
        g[TAU_GRID_LEN - 1]
    ))
}

/// Calibrate `(λ, τ)` so that `min_gap = σ Φ^{-1}(1 - α/2p)`, returning the
/// solution with the smallest `λ` (ties: smallest `τ`).
pub fn calibrate_orthogonal(target: &CalibrationTarget, family: TwinFamily) -> Result<PenaltySpec> {
    let gap = target.gap()?;
    candidates(family, gap)?
        .into_iter()
        .min_by(|a, b| order_key(a).partial_cmp(&order_key(b)).expect("finite"))
        .ok_or_else(|| no_root(gap))
}

/// As [`calibrate_orthogonal`], but choose the solution selecting the most
/// entries of `z = X' y` under the exact threshold (ties: smallest `λ`, then
/// smallest `τ`).
pub fn calibrate_orthogonal_with_data(target: &CalibrationTarget, family: TwinFamily, z: &[f64]) -> Result<PenaltySpec> {
    let gap = target.gap()?;
    let mut best: Option<(usize, PenaltySpec)> = None;
    for s in candidates(family, gap)? {
        let count = z.iter().filter(|v| s.threshold(**v) != 0.0).count();
        let better = match &best {
            None => true,
            Some((c, b)) => count > *c || (count == *c && order_key(&s) < order_key(b)),
        };
        if better {
            best = Some((count, s));
        }
    }
    best.map(|(_, s)| s).ok_or_else(|| no_root(gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn target_quantile() {
        let t = CalibrationTarget::new(0.1, 100, 1.0).unwrap();
        assert!((t.gap().unwrap() - 3.290_526_731_491_894_8).abs() < 1e-12);
        let one = CalibrationTarget::new(1.0, 7, 1.0).unwrap();
        assert!(one.gap().unwrap() > 0.0);
        assert!(calibrate_orthogonal(&one, TwinFamily::A).is_ok());
        assert!(CalibrationTarget::new(0.0, 7, 1.0).is_err());
    }

    #[test]
    fn self_consistency() {
        let mut rng = rng_from_seed(42);
        for _ in 0..100 {
            let t = CalibrationTarget::new(rng.random_range(0.01..1.0), rng.random_range(1..5000), rng.random_range(0.1..10.0)).unwrap();
            let gap = t.gap().unwrap();
            for family in [TwinFamily::A, TwinFamily::b()] {
                let s = calibrate_orthogonal(&t, family).unwrap();
                assert!((s.min_gap() - gap).abs() <= 1e-8 * gap, "{s:?}");
                for c in candidates(family, gap).unwrap() {
                    assert!((c.min_gap() - gap).abs() <= 1e-8 * gap);
                    assert!(c.lambda() >= s.lambda());
                }
            }
        }
    }

    #[test]
    fn smallest_lambda_is_the_gap() {
        let t = CalibrationTarget::new(0.2, 256, 1.0).unwrap();
        let gap = t.gap().unwrap();
        let s = calibrate_orthogonal(&t, TwinFamily::A).unwrap();
        assert!((s.lambda() - gap).abs() <= 1e-12 * gap);
        let tau = s.tau().unwrap();
        assert!(tau >= gap && tau_grid(gap).iter().filter(|v| **v >= gap).all(|v| *v >= tau));
    }

    #[test]
    fn data_rule_selects_at_least_as_many() {
        let t = CalibrationTarget::new(0.2, 50, 1.0).unwrap();
        let gap = t.gap().unwrap();
        let z: Vec<f64> = (0..50).map(|j| gap * (0.5 + j as f64 / 25.0)).collect();
        let plain = calibrate_orthogonal(&t, TwinFamily::A).unwrap();
        let data = calibrate_orthogonal_with_data(&t, TwinFamily::A, &z).unwrap();
        let count = |s: &PenaltySpec| z.iter().filter(|v| s.threshold(**v) != 0.0).count();
        assert!(count(&data) >= count(&plain));
        assert!((data.min_gap() - gap).abs() <= 1e-8 * gap);
    }
}
