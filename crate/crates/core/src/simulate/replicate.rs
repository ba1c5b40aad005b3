use rayon::prelude::*;

use super::generate::{generate_dataset, generate_test_set};
use super::scenario::SimScenario;
use crate::error::{Error, Result};
use crate::metrics::{aggregate, fdr, mspe, tdr, CurvePoint, SelectionOutcome, SelectionReport};
use crate::penalty::PenaltySpec;
use crate::rng::derive_seed;
use crate::solver::{fit_path, Algorithm, PathConfig, SolverConfig};

/// One method of a benchmark: a penalty template and an algorithm.
///
/// The template's `τ` (and any explicit `λ` grid) is expressed for
/// unit-variance columns; it is rescaled by `sqrt(n)` for the unit-norm
/// columns the solver works with. Reported `λ` values use the same
/// unit-variance scale.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub label: String,
    pub template: PenaltySpec,
    pub algorithm: Algorithm,
}

impl MethodSpec {
    pub fn new(template: PenaltySpec, algorithm: Algorithm) -> Self {
        let label = match (&template, algorithm) {
            (t, Algorithm::Cd) if !t.is_twin() => t.name().to_string(),
            (t, a) => format!("{}:{}", t.name(), a.name()),
        };
        Self { label, template, algorithm }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationConfig {
    pub n_reps: usize,
    pub path: PathConfig,
    pub solver: SolverConfig,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for ReplicationConfig {
    fn default() -> Self {
        Self { n_reps: 20, path: PathConfig::default(), solver: SolverConfig::default(), jobs: None }
    }
}

/// Curves of every method on replication `rep`. A failed fit yields `None`
/// for that method.
pub fn replicate_curve(
    scenario: &SimScenario,
    rep: usize,
    methods: &[MethodSpec],
    cfg: &ReplicationConfig,
) -> Result<Vec<Option<Vec<CurvePoint>>>> {
    let sc = scenario.for_replication(rep);
    let data = generate_dataset(&sc)?;
    let test = generate_test_set(&sc, &data)?;
    let prob = data.problem.center().standardize()?;
    let scale = prob.sample_scale();
    let path_cfg = PathConfig {
        lambdas: cfg.path.lambdas.as_ref().map(|l| l.iter().map(|v| v * scale).collect()),
        ..cfg.path.clone()
    };
    let solver = SolverConfig { rng_seed: derive_seed(cfg.solver.rng_seed, sc.seed), ..cfg.solver.clone() };
    let curves = methods
        .iter()
        .map(|m| {
            let template = m.template.rescaled(scale).ok()?;
            let path = fit_path(&prob, &template, &path_cfg, &solver, m.algorithm).ok()?;
            path.fits
                .iter()
                .zip(&path.lambdas)
                .map(|(f, &lambda)| {
                    let out = SelectionOutcome::new(f.active_set.iter().copied(), data.active_true.iter().copied(), sc.p).ok()?;
                    let beta = prob.to_original_scale(&f.beta);
                    let err = mspe(&beta, prob.intercept(&f.beta), &test.x, &test.y).ok()?;
                    Some(CurvePoint {
                        lambda: lambda / scale,
                        fdr: fdr(&out),
                        tdr: tdr(&out),
                        size: out.size() as f64,
                        rmse: err.sqrt(),
                    })
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect();
    Ok(curves)
}

/// Run `cfg.n_reps` replications of `scenario` and aggregate by grid index.
///
/// Replication `r` uses dataset seed `scenario.seed + r`. The report does not
/// depend on the number of worker threads.
pub fn run_replications(scenario: &SimScenario, methods: &[MethodSpec], cfg: &ReplicationConfig) -> Result<SelectionReport> {
    if cfg.n_reps == 0 {
        return Err(Error::InvalidConfig("n_reps must be at least 1".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidConfig("no methods given".into()));
    }
    scenario.validate()?;
    cfg.solver.validate()?;
    let work = || {
        (0..cfg.n_reps)
            .into_par_iter()
            .map(|r| replicate_curve(scenario, r, methods, cfg))
            .collect::<Result<Vec<_>>>()
    };
    let per_rep = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let mut reports = Vec::with_capacity(methods.len());
    for (m, method) in methods.iter().enumerate() {
        let curves: Vec<_> = per_rep.iter().map(|r| r[m].clone()).collect();
        reports.push(aggregate(&method.label, &curves)?);
    }
    Ok(SelectionReport::merge(reports))
}
