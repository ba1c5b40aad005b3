//! Subcommands and the settings they share.

pub mod bench;
pub mod calibrate;
pub mod cv;
pub mod fit;
pub mod path;
pub mod simulate;

use std::path::PathBuf;

use twinreg::dataio::read_labeled_csv;
use twinreg::kvconfig::KvConfig;
use twinreg::penalty::PenaltySpec;
use twinreg::simulate::SimScenario;
use twinreg::solver::{Algorithm, CoordinateOrder, PathConfig, Problem, SolverConfig};

use crate::error::{input, CliError, CliResult};
use crate::output::OutputDir;
use crate::settings::Settings;

pub const DEFAULT_TAU: f64 = 0.1;

/// Shape parameters shared by every penalty family.
#[derive(Debug, Clone, Copy)]
pub struct Shapes {
    pub tau: f64,
    pub h: f64,
    pub gamma: f64,
    pub a: f64,
}

impl Shapes {
    pub fn read(s: &mut Settings) -> CliResult<Self> {
        Ok(Self { tau: s.get("tau", DEFAULT_TAU)?, h: s.get("h", 0.5)?, gamma: s.get("gamma", 1.4)?, a: s.get("a", 3.7)? })
    }

    pub fn spec(&self, family: &str, lambda: f64) -> CliResult<PenaltySpec> {
        let spec = match family {
            "twin-a" => PenaltySpec::twin_a(lambda, self.tau),
            "twin-b" => PenaltySpec::twin_b(lambda, self.tau, self.h),
            "lasso" => PenaltySpec::lasso(lambda),
            "mcp" => PenaltySpec::mcp(lambda, self.gamma),
            "scad" => PenaltySpec::scad(lambda, self.a),
            other => return Err(input(format!("unknown penalty {other:?} (expected twin-a, twin-b, lasso, mcp or scad)"))),
        };
        Ok(spec?)
    }
}

/// Penalty on the unit-variance scale. `lambda` falls back to 1 when the
/// command only needs the family and shape.
pub fn penalty(s: &mut Settings, lambda_required: bool) -> CliResult<PenaltySpec> {
    let family: String = s.get("penalty", "twin-a".to_string())?;
    let lambda = if lambda_required { s.required("lambda")? } else { 1.0 };
    let shapes = Shapes::read(s)?;
    shapes.spec(&family, lambda)
}

pub fn algorithm(s: &mut Settings) -> CliResult<Algorithm> {
    s.get("algorithm", Algorithm::Cd)
}

pub fn solver(s: &mut Settings) -> CliResult<SolverConfig> {
    let d = SolverConfig::default();
    let order: String = s.get("order", "random".to_string())?;
    let cfg = SolverConfig {
        max_sweeps: s.get("max_sweeps", d.max_sweeps)?,
        tol: s.get("tol", d.tol)?,
        coordinate_order: order.parse::<CoordinateOrder>()?,
        rng_seed: s.get("seed", d.rng_seed)?,
        lla_outer_iters: s.get("lla_iters", d.lla_outer_iters)?,
        kkt_tol: s.get("kkt_tol", d.kkt_tol)?,
        ..d
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn path_config(s: &mut Settings) -> CliResult<PathConfig> {
    Ok(PathConfig { n_lambda: s.get("n_lambda", 100)?, lambda_min_ratio: s.opt("lambda_min_ratio")?, lambdas: None })
}

/// Output directory; it is not part of the manifest so a replay into another
/// directory reproduces the manifest too.
pub fn output_dir(s: &mut Settings, required: bool) -> CliResult<Option<OutputDir>> {
    s.ignore(&["output_dir"]);
    match s.given().get_str("output_dir").map(PathBuf::from) {
        Some(d) => OutputDir::create(&d).map(Some),
        None if required => Err(input("missing required setting --output-dir")),
        None => Ok(None),
    }
}

/// Input CSV as `(raw problem, predictor names)`.
pub fn load_input(s: &mut Settings) -> CliResult<(Problem, Vec<String>)> {
    let given: String = s.required("input")?;
    let path = std::fs::canonicalize(&given).map_err(|e| input(format!("{given}: {e}")))?;
    s.record("input", &path.display());
    let (problem, mut names) = read_labeled_csv(&path)?;
    names.remove(0);
    Ok((problem, names))
}

/// Center and standardize, naming the offending column on failure.
pub fn prepare(raw: &Problem, names: &[String]) -> CliResult<Problem> {
    raw.center().standardize().map_err(|e| match e {
        twinreg::Error::ZeroNormColumn(j) => input(format!("predictor {:?} is constant", names[j])),
        other => CliError::from(other),
    })
}

/// Scenario from the settings. The dataset seed is `data_seed`; a scenario
/// file's `seed` is renamed to it when layered.
pub fn scenario(s: &mut Settings) -> CliResult<SimScenario> {
    let mut kv = KvConfig::new();
    for key in SimScenario::KEYS {
        let name = if key == "seed" { "data_seed" } else { key };
        if let Some(v) = s.given().get_str(name) {
            kv.set(key, v);
        }
    }
    let sc = SimScenario::from_kv(&kv)?;
    for (k, v) in sc.to_kv().iter() {
        s.record(if k == "seed" { "data_seed" } else { k }, &v);
    }
    Ok(sc)
}

pub fn fmt_names(names: &[String], idx: &[usize]) -> String {
    idx.iter().map(|&j| names[j].as_str()).collect::<Vec<_>>().join(";")
}
