//! Penalized least squares `½‖y - Xβ‖² + Σ_j P(|β_j|)` on standardized designs.
//!
//! Two algorithms are provided:
//!
//! * [`fit_cd`]: coordinate descent where every coordinate update is the
//!   exact global minimizer of the one-dimensional problem
//!   ([`PenaltySpec::threshold`]).
//! * [`fit_mclla`]: local linear approximation. The penalty is replaced by its
//!   tangent weighted-ℓ₁ surrogate at the current iterate and the surrogate is
//!   minimized by coordinate descent; a few outer refreshes of the weights are
//!   made.
//!
//! [`fit_path`] runs either algorithm along a decreasing `λ` grid with warm
//! starts, and [`kkt_check`] verifies first-order optimality.

mod cd;
mod kkt;
mod mclla;
mod path;
mod problem;

pub use cd::fit_cd;
pub use kkt::{kkt_check, KktCheck};
pub use mclla::fit_mclla;
pub use path::{default_lambda_min_ratio, fit_path, lambda_grid, path_lambdas, PathConfig, PathResult};
pub use problem::{Problem, STANDARDIZED_TOL};

use crate::error::{Error, Result};
use crate::penalty::PenaltySpec;

/// Order in which coordinates are visited within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordinateOrder {
    Cyclic,
    /// A fresh seeded permutation every sweep.
    RandomPermutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Cd,
    Mclla,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cd => "cd",
            Algorithm::Mclla => "mclla",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cd" => Ok(Algorithm::Cd),
            "mclla" => Ok(Algorithm::Mclla),
            other => Err(Error::Parse(format!("unknown algorithm {other:?} (expected cd or mclla)"))),
        }
    }
}

impl std::str::FromStr for CoordinateOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "cyclic" => Ok(CoordinateOrder::Cyclic),
            "random" | "random-permutation" => Ok(CoordinateOrder::RandomPermutation),
            other => Err(Error::Parse(format!("unknown coordinate order {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_sweeps: usize,
    /// Convergence when `max_j |Δβ_j| <= tol * max(1, max_j |β_j|)` over a sweep.
    pub tol: f64,
    pub coordinate_order: CoordinateOrder,
    pub rng_seed: u64,
    pub lla_outer_iters: usize,
    pub kkt_tol: f64,
    /// Sweep only the active set between full sweeps when `p` exceeds this.
    pub active_set_min_p: usize,
    /// Record the objective, recomputed from scratch, after every sweep.
    pub record_objective_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 1000,
            tol: 1e-7,
            coordinate_order: CoordinateOrder::RandomPermutation,
            rng_seed: 0,
            lla_outer_iters: 3,
            kkt_tol: 1e-4,
            active_set_min_p: 2000,
            record_objective_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 || self.lla_outer_iters == 0 {
            return Err(Error::InvalidConfig("sweep and outer iteration counts must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidConfig(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if !(self.kkt_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("kkt_tol must be positive, got {}", self.kkt_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spec: PenaltySpec,
    pub algorithm: Algorithm,
    pub beta: Vec<f64>,
    /// Indices `j` with `beta[j] != 0`, increasing.
    pub active_set: Vec<usize>,
    pub objective: f64,
    pub sweeps_used: usize,
    pub converged: bool,
    pub kkt_max_violation: f64,
    /// Objective after each sweep; empty unless requested in the config.
    pub objective_trace: Vec<f64>,
}

impl FitResult {
    pub(crate) fn assemble(
        problem: &Problem,
        spec: PenaltySpec,
        algorithm: Algorithm,
        beta: Vec<f64>,
        sweeps_used: usize,
        converged: bool,
        objective_trace: Vec<f64>,
        kkt_tol: f64,
    ) -> Result<Self> {
        let active_set = beta.iter().enumerate().filter(|(_, b)| **b != 0.0).map(|(j, _)| j).collect();
        let objective = problem.objective(&spec, &beta);
        let kkt = kkt_check(problem, &spec, &beta, kkt_tol)?;
        Ok(Self {
            spec,
            algorithm,
            beta,
            active_set,
            objective,
            sweeps_used,
            converged,
            kkt_max_violation: kkt.max_violation,
            objective_trace,
        })
    }

    pub fn model_size(&self) -> usize {
        self.active_set.len()
    }
}

/// Fit with the chosen algorithm.
pub fn fit(
    problem: &Problem,
    spec: &PenaltySpec,
    config: &SolverConfig,
    algorithm: Algorithm,
    warm_start: Option<&[f64]>,
) -> Result<FitResult> {
    match algorithm {
        Algorithm::Cd => fit_cd(problem, spec, config, warm_start),
        Algorithm::Mclla => fit_mclla(problem, spec, config, warm_start),
    }
}
