use rand::seq::index::sample;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::scenario::{CoefficientScheme, DesignKind, SimScenario};
use crate::error::{Error, Result};
use crate::linalg::{dot, DenseMatrix};
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::solver::Problem;

const DESIGN_STREAM: u64 = 1;
const COEF_STREAM: u64 = 2;
const NOISE_STREAM: u64 = 3;
const TEST_DESIGN_STREAM: u64 = 4;
const TEST_NOISE_STREAM: u64 = 5;

/// A generated training dataset with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SimDataset {
    /// Raw (unstandardized, uncentered) data.
    pub problem: Problem,
    pub beta_true: Vec<f64>,
    /// Sorted indices of the nonzero entries of `beta_true`.
    pub active_true: Vec<usize>,
    pub sigma: f64,
    /// `sqrt(β' Σ̂ β) / σ` with `Σ̂ = X'X / n`.
    pub snr_realized: f64,
    pub seed: u64,
}

/// An independent test sample from the same population.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    pub x: DenseMatrix,
    pub y: Vec<f64>,
}

fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn gaussian_rows(scenario: &SimScenario, rows: usize, rng: &mut Rng) -> DenseMatrix {
    let p = scenario.p;
    let mut x = DenseMatrix::zeros(rows, p);
    match scenario.design_kind {
        DesignKind::Ar1 => {
            let rho = scenario.rho;
            let s = (1.0 - rho * rho).sqrt();
            for i in 0..rows {
                let mut prev = normal(rng);
                x.set(i, 0, prev);
                for j in 1..p {
                    prev = rho * prev + s * normal(rng);
                    x.set(i, j, prev);
                }
            }
        }
        DesignKind::IidGaussian | DesignKind::Orthonormal => {
            let sd = 1.0 / (scenario.n as f64).sqrt();
            for j in 0..p {
                for v in x.col_mut(j) {
                    *v = sd * normal(rng);
                }
            }
        }
    }
    x
}

/// Training design drawn from `rng`.
///
/// Orthonormal designs are the Gram-Schmidt orthonormalization of a Gaussian
/// draw and need `p <= n`.
pub fn gen_design(scenario: &SimScenario, rng: &mut Rng) -> Result<DenseMatrix> {
    if scenario.design_kind == DesignKind::Orthonormal && scenario.p > scenario.n {
        return Err(Error::InvalidScenario(format!(
            "orthonormal design requires p <= n, got n={}, p={}",
            scenario.n, scenario.p
        )));
    }
    let mut x = gaussian_rows(scenario, scenario.n, rng);
    if scenario.design_kind == DesignKind::Orthonormal {
        x.orthonormalize_columns()?;
    }
    Ok(x)
}

/// True coefficients and their sorted support.
pub fn gen_coefficients(scenario: &SimScenario, rng: &mut Rng) -> (Vec<f64>, Vec<usize>) {
    let mut beta = vec![0.0; scenario.p];
    let order = sample(rng, scenario.p, scenario.k).into_vec();
    for (j, &idx) in order.iter().enumerate() {
        beta[idx] = match scenario.scheme {
            CoefficientScheme::UniformMagnitude => {
                let m: f64 = rng.random_range(0.5..=2.0);
                if rng.random::<bool>() { m } else { -m }
            }
            CoefficientScheme::GeometricDecay => (-scenario.decay_c).powi(j as i32),
            CoefficientScheme::Constant => {
                if rng.random::<bool>() { scenario.magnitude } else { -scenario.magnitude }
            }
        };
    }
    let mut active = order;
    active.sort_unstable();
    (beta, active)
}

/// `β' Σ β` for `Σ_ij = ρ^|i-j|`, in `O(p)`.
pub fn ar1_quadratic_form(beta: &[f64], rho: f64) -> f64 {
    let mut carry = 0.0;
    let mut q = 0.0;
    for (j, &b) in beta.iter().enumerate() {
        if j > 0 {
            carry = rho * (carry + beta[j - 1]);
        }
        q += b * b + 2.0 * b * carry;
    }
    q
}

/// `β' Σ β` under the scenario's population row covariance.
pub fn population_quadratic_form(scenario: &SimScenario, beta: &[f64]) -> f64 {
    match scenario.design_kind {
        DesignKind::Ar1 => ar1_quadratic_form(beta, scenario.rho),
        DesignKind::IidGaussian | DesignKind::Orthonormal => dot(beta, beta) / scenario.n as f64,
    }
}

fn noise_level(scenario: &SimScenario, beta: &[f64]) -> Result<f64> {
    if let Some(s) = scenario.sigma {
        return Ok(s);
    }
    if scenario.snr.is_infinite() {
        return Ok(0.0);
    }
    let q = population_quadratic_form(scenario, beta);
    if !(q > 0.0) {
        return Err(Error::InvalidScenario("SNR undefined for a zero coefficient vector".into()));
    }
    Ok(q.sqrt() / scenario.snr)
}

/// `y = X β + σ z` with `σ = sqrt(β' Σ β) / snr` unless the scenario fixes `σ`.
pub fn gen_response(design: &DenseMatrix, beta: &[f64], scenario: &SimScenario, rng: &mut Rng) -> Result<(Vec<f64>, f64)> {
    if beta.len() != design.ncols() {
        return Err(Error::DimensionMismatch { expected: design.ncols(), got: beta.len() });
    }
    let sigma = noise_level(scenario, beta)?;
    let mut y = design.mul_vec(beta);
    for v in y.iter_mut() {
        *v += sigma * normal(rng);
    }
    Ok((y, sigma))
}

/// Training dataset for `scenario.seed`.
pub fn generate_dataset(scenario: &SimScenario) -> Result<SimDataset> {
    scenario.validate()?;
    let x = gen_design(scenario, &mut rng_from_seed(derive_seed(scenario.seed, DESIGN_STREAM)))?;
    let (beta_true, active_true) = gen_coefficients(scenario, &mut rng_from_seed(derive_seed(scenario.seed, COEF_STREAM)));
    let (y, sigma) = gen_response(&x, &beta_true, scenario, &mut rng_from_seed(derive_seed(scenario.seed, NOISE_STREAM)))?;
    let signal = x.mul_vec(&beta_true);
    let q_hat = dot(&signal, &signal) / scenario.n as f64;
    let snr_realized = if sigma > 0.0 { q_hat.sqrt() / sigma } else { f64::INFINITY };
    Ok(SimDataset { problem: Problem::new(y, x)?, beta_true, active_true, sigma, snr_realized, seed: scenario.seed })
}

/// Independent test sample of `scenario.test_size` rows for `dataset`.
pub fn generate_test_set(scenario: &SimScenario, dataset: &SimDataset) -> Result<TestSet> {
    if scenario.test_size == 0 {
        return Err(Error::InvalidScenario("test_size must be positive".into()));
    }
    let mut rng = rng_from_seed(derive_seed(dataset.seed, TEST_DESIGN_STREAM));
    let x = gaussian_rows(scenario, scenario.test_size, &mut rng);
    let mut noise = rng_from_seed(derive_seed(dataset.seed, TEST_NOISE_STREAM));
    let mut y = x.mul_vec(&dataset.beta_true);
    for v in y.iter_mut() {
        *v += dataset.sigma * normal(&mut noise);
    }
    Ok(TestSet { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scen() -> SimScenario {
        SimScenario { n: 100, p: 20, k: 3, test_size: 10, ..Default::default() }
    }

    #[test]
    fn geometric_decay_signs() {
        let s = SimScenario { scheme: CoefficientScheme::GeometricDecay, decay_c: 0.8, ..scen() };
        let mut rng = rng_from_seed(3);
        let mut check = rng.clone();
        let (beta, active) = gen_coefficients(&s, &mut rng);
        let order = sample(&mut check, s.p, s.k).into_vec();
        let got: Vec<f64> = order.iter().map(|&j| beta[j]).collect();
        assert_eq!(got, vec![1.0, -0.8, 0.8 * 0.8]);
        assert_eq!(active.len(), 3);
        let s50 = SimScenario { p: 100, k: 50, decay_c: 0.95, ..s };
        let (b, _) = gen_coefficients(&s50, &mut rng_from_seed(1));
        let min = b.iter().filter(|v| **v != 0.0).map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        assert!((min - 0.95f64.powi(49)).abs() < 1e-15);
        assert!((min - 0.0810).abs() < 1e-4);
    }

    #[test]
    fn uniform_magnitudes_bounded_away_from_zero() {
        let s = SimScenario { p: 500, k: 400, ..scen() };
        let (beta, active) = gen_coefficients(&s, &mut rng_from_seed(9));
        assert_eq!(active.len(), 400);
        assert!(active.windows(2).all(|w| w[0] < w[1]));
        for (j, b) in beta.iter().enumerate() {
            if active.binary_search(&j).is_ok() {
                assert!((0.5..=2.0).contains(&b.abs()), "{b}");
            } else {
                assert_eq!(*b, 0.0);
            }
        }
        assert!(beta.iter().any(|b| *b < 0.0) && beta.iter().any(|b| *b > 0.0));
    }

    #[test]
    fn quadratic_forms() {
        assert!((ar1_quadratic_form(&[1.0, 1.0], -0.75) - 0.5).abs() < 1e-15);
        let rho: f64 = 0.6;
        let beta = [0.3, -1.0, 0.0, 2.0, 0.5];
        let mut dense = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                dense += beta[i] * beta[j] * rho.powi((i as i32 - j as i32).abs());
            }
        }
        assert!((ar1_quadratic_form(&beta, rho) - dense).abs() < 1e-12);
    }

    #[test]
    fn noise_from_snr() {
        let mut b = vec![0.0; 20];
        b[0] = 1.0;
        let s = SimScenario { rho: 0.0, snr: 3.0, ..scen() };
        assert!((noise_level(&s, &b).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        b[1] = 1.0;
        let s = SimScenario { rho: -0.75, snr: 5.0, ..scen() };
        assert!((noise_level(&s, &b).unwrap() - 0.5f64.sqrt() / 5.0).abs() < 1e-15);
        assert!(noise_level(&s, &vec![0.0; 20]).is_err());
        let inf = SimScenario { snr: f64::INFINITY, ..scen() };
        let ds = generate_dataset(&inf).unwrap();
        assert_eq!(ds.sigma, 0.0);
        assert_eq!(ds.problem.y(), ds.problem.x().mul_vec(&ds.beta_true).as_slice());
    }

    #[test]
    fn orthonormal_design() {
        let s = SimScenario { n: 64, p: 32, design_kind: DesignKind::Orthonormal, ..scen() };
        let x = gen_design(&s, &mut rng_from_seed(5)).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let g = dot(x.col(i), x.col(j));
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
        let wide = SimScenario { n: 10, p: 32, design_kind: DesignKind::Orthonormal, ..scen() };
        assert!(gen_design(&wide, &mut rng_from_seed(5)).is_err());
    }

    #[test]
    fn replication_seeds_are_decoupled() {
        let s = scen();
        let a = generate_dataset(&s.for_replication(3)).unwrap();
        let b = generate_dataset(&SimScenario { seed: s.seed + 3, ..s.clone() }).unwrap();
        assert_eq!(a, b);
        assert_ne!(generate_dataset(&s.for_replication(2)).unwrap().problem, a.problem);
        let t1 = generate_test_set(&s, &a).unwrap();
        assert_eq!(t1, generate_test_set(&s, &b).unwrap());
        assert_eq!(t1.x.nrows(), 10);
    }
}
