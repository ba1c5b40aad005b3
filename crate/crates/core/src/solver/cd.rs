use rand::seq::SliceRandom;

use super::{Algorithm, CoordinateOrder, FitResult, Problem, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot};
use crate::penalty::PenaltySpec;
use crate::rng::{rng_from_seed, Rng};

/// Coordinate descent with exact univariate updates.
///
/// Each update sets `β_j ← threshold(x_j' r + β_j)` where `r = y - Xβ` is
/// maintained incrementally, so the objective never increases.
pub fn fit_cd(
    problem: &Problem,
    spec: &PenaltySpec,
    config: &SolverConfig,
    warm_start: Option<&[f64]>,
) -> Result<FitResult> {
    config.validate()?;
    problem.check_standardized()?;
    let mut engine = Engine::new(problem, config, warm_start)?;
    let (sweeps, converged) = engine.run(&mut |_, z, _| spec.threshold(z), spec)?;
    let Engine { beta, trace, .. } = engine;
    FitResult::assemble(problem, *spec, Algorithm::Cd, beta, sweeps, converged, trace, config.kkt_tol)
}

/// Shared sweep machinery for both solvers.
pub(super) struct Engine<'a> {
    problem: &'a Problem,
    config: &'a SolverConfig,
    pub(super) beta: Vec<f64>,
    resid: Vec<f64>,
    rng: Rng,
    order: Vec<usize>,
    pub(super) trace: Vec<f64>,
}

impl<'a> Engine<'a> {
    pub(super) fn new(problem: &'a Problem, config: &'a SolverConfig, warm_start: Option<&[f64]>) -> Result<Self> {
        let beta = match warm_start {
            Some(b) => {
                problem.check_beta(b)?;
                if !b.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidProblem("warm start has non-finite entries".into()));
                }
                b.to_vec()
            }
            None => vec![0.0; problem.p()],
        };
        let resid = problem.residual(&beta);
        Ok(Self {
            problem,
            config,
            beta,
            resid,
            rng: rng_from_seed(config.rng_seed),
            order: Vec::with_capacity(problem.p()),
            trace: Vec::new(),
        })
    }

    pub(super) fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Sweep until the relative coordinate change drops below `tol` or the
    /// sweep budget is spent. Returns `(sweeps, converged)`.
    pub(super) fn run<F>(&mut self, update: &mut F, trace_spec: &PenaltySpec) -> Result<(usize, bool)>
    where
        F: FnMut(usize, f64, f64) -> f64,
    {
        let p = self.problem.p();
        let cycle_active = p > self.config.active_set_min_p;
        let mut sweeps = 0;
        loop {
            let full: Vec<usize> = (0..p).collect();
            let change = self.sweep(&full, update, trace_spec)?;
            sweeps += 1;
            if change <= self.threshold() {
                return Ok((sweeps, true));
            }
            if sweeps >= self.config.max_sweeps {
                return Ok((sweeps, false));
            }
            if cycle_active {
                loop {
                    let active: Vec<usize> = (0..p).filter(|&j| self.beta[j] != 0.0).collect();
                    let change = self.sweep(&active, update, trace_spec)?;
                    sweeps += 1;
                    if sweeps >= self.config.max_sweeps {
                        return Ok((sweeps, false));
                    }
                    if change <= self.threshold() {
                        break;
                    }
                }
            }
        }
    }

    fn threshold(&self) -> f64 {
        let scale = self.beta.iter().fold(1.0f64, |m, b| m.max(b.abs()));
        self.config.tol * scale
    }

    fn sweep<F>(&mut self, coords: &[usize], update: &mut F, trace_spec: &PenaltySpec) -> Result<f64>
    where
        F: FnMut(usize, f64, f64) -> f64,
    {
        self.order.clear();
        self.order.extend_from_slice(coords);
        if self.config.coordinate_order == CoordinateOrder::RandomPermutation {
            self.order.shuffle(&mut self.rng);
        }
        let x = self.problem.x();
        let mut max_change = 0.0f64;
        for idx in 0..self.order.len() {
            let j = self.order[idx];
            let col = x.col(j);
            let old = self.beta[j];
            let z = dot(col, &self.resid) + old;
            let new = update(j, z, old);
            if !new.is_finite() {
                return Err(Error::Divergence(format!("coordinate {j} became {new} (z = {z})")));
            }
            let delta = new - old;
            if delta != 0.0 {
                axpy(-delta, col, &mut self.resid);
                self.beta[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        if self.config.record_objective_trace {
            self.trace.push(self.problem.objective(trace_spec, &self.beta));
        }
        Ok(max_change)
    }
}
