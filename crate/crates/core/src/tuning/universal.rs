use crate::error::{Error, Result};

/// Inputs of the universal tuning rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalInputs {
    pub n: usize,
    pub p: usize,
    pub sigma: f64,
    /// Prior upper bound on the sparsity fraction, used by the
    /// high-dimensional TWIN-b rule.
    pub epsilon_prior: Option<f64>,
}

impl UniversalInputs {
    pub fn new(n: usize, p: usize, sigma: f64) -> Self {
        Self { n, p, sigma, epsilon_prior: None }
    }

    /// `δ = n / p`.
    pub fn delta(&self) -> f64 {
        self.n as f64 / self.p as f64
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::Tuning(format!("n and p must be positive, got n={}, p={}", self.n, self.p)));
        }
        if self.p < 2 {
            return Err(Error::Tuning("universal rules need p >= 2 (sqrt(2 log p) vanishes at p = 1)".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Tuning(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    fn base_level(&self) -> f64 {
        self.sigma * (2.0 * (self.p as f64).ln()).sqrt()
    }
}

/// `(1 + δ^{-1/2}) σ sqrt(2 log p)` and `(0.99 - δ^{-1/2})^{-2} λ`.
pub fn universal_twin_a(inputs: &UniversalInputs) -> Result<(f64, f64)> {
    inputs.validate()?;
    let r = inputs.delta().powf(-0.5);
    if !(0.99 - r > 0.0) {
        return Err(Error::Tuning(format!(
            "universal TWIN-a rule requires n sufficiently larger than p: need n/p > {:.6}, got {:.6}",
            1.0 / (0.99f64 * 0.99),
            inputs.delta()
        )));
    }
    let lambda = (1.0 + r) * inputs.base_level();
    Ok((lambda, lambda / ((0.99 - r) * (0.99 - r))))
}

/// `λ = σ sqrt(2 log p)`; `τ = (0.99 - δ^{-1/2})^{-2} λ`, or with `high_dim`
/// `τ = (0.99 - sqrt((ε'/δ + 1)/2))^{-2} λ`.
pub fn universal_twin_b(inputs: &UniversalInputs, high_dim: bool) -> Result<(f64, f64)> {
    inputs.validate()?;
    let lambda = inputs.base_level();
    let delta = inputs.delta();
    let gap = if high_dim {
        let eps = inputs.epsilon_prior.ok_or_else(|| {
            Error::Tuning("high-dimensional universal TWIN-b rule requires epsilon_prior".into())
        })?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Tuning(format!("epsilon_prior must lie in (0, 1), got {eps}")));
        }
        let g = 0.99 - ((eps / delta + 1.0) / 2.0).sqrt();
        if !(g > 0.0) {
            return Err(Error::Tuning(format!(
                "high-dimensional universal TWIN-b rule requires sqrt((epsilon_prior/delta + 1)/2) < 0.99, \
                 got epsilon_prior/delta = {:.6}",
                eps / delta
            )));
        }
        g
    } else {
        let g = 0.99 - delta.powf(-0.5);
        if !(g > 0.0) {
            return Err(Error::Tuning(format!(
                "low-dimensional universal TWIN-b rule requires n sufficiently larger than p: need n/p > {:.6}, got {:.6}",
                1.0 / (0.99f64 * 0.99),
                delta
            )));
        }
        g
    };
    Ok((lambda, lambda / (gap * gap)))
}
