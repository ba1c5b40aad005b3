//! Command-line front end for `twinreg`.
//!
//! Penalty levels `--lambda` and `--tau` are given for predictors scaled to
//! unit variance with the loss `‖y - Xβ‖² / 2n`, the usual convention of
//! regularization-path software; they are converted internally. Universal
//! and calibrated values printed by `calibrate` are for unit-norm columns.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use twinreg::kvconfig::KvConfig;

mod commands;
pub mod error;
mod output;
mod settings;

use error::CliResult;
use settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "twinreg", version, about = "Sparse regression with TWIN and classical nonconvex penalties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit one penalized model to a CSV file
    Fit(DataCmd),
    /// Compute a regularization path on a CSV file
    Path(DataCmd),
    /// Choose lambda by K-fold cross-validation and refit
    Cv(DataCmd),
    /// Run a simulation benchmark and write a selection report
    Bench(BenchCmd),
    /// Compute universal or orthogonal-design calibrated tuning parameters
    Calibrate(CalibrateCmd),
    /// Generate a dataset from a scenario and export it
    Simulate(SimulateCmd),
    /// Re-run a command from its manifest
    Replay(ReplayCmd),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// key = value settings file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for outputs and the run manifest
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct PenaltyArgs {
    /// twin-a, twin-b, lasso, mcp or scad
    #[arg(long)]
    penalty: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    /// TWIN peak location (default 0.1)
    #[arg(long)]
    tau: Option<f64>,
    /// TWIN-b flat level in (0, 1) (default 0.5)
    #[arg(long)]
    h: Option<f64>,
    /// MCP concavity (default 1.4)
    #[arg(long)]
    gamma: Option<f64>,
    /// SCAD shape (default 3.7)
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SolverArgs {
    /// cd or mclla
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// cyclic or random
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    kkt_tol: Option<f64>,
    #[arg(long)]
    lla_iters: Option<usize>,
    #[arg(long)]
    n_lambda: Option<usize>,
    #[arg(long)]
    lambda_min_ratio: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct DataCmd {
    #[command(flatten)]
    common: Common,
    /// CSV with a header; first column is the response
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Number of folds (cv only)
    #[arg(long)]
    folds: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// Scenario file (key = value); flags and --config override it
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    data_seed: Option<u64>,
    #[arg(long)]
    test_size: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct BenchCmd {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated methods, e.g. twin-a:cd,twin-a:mclla,lasso
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated tau values; TWIN methods are run once per value
    #[arg(long)]
    tau_sweep: Option<String>,
    /// Worker threads for replications
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug, Default)]
struct CalibrateCmd {
    #[command(flatten)]
    common: Common,
    /// universal-a, universal-b or orthogonal
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// twin-a or twin-b (orthogonal rule)
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    h: Option<f64>,
    /// Prior sparsity bound for the high-dimensional TWIN-b rule
    #[arg(long)]
    epsilon_prior: Option<f64>,
    /// Use the high-dimensional TWIN-b rule
    #[arg(long)]
    high_dim: bool,
}

#[derive(Args, Debug, Default)]
struct SimulateCmd {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args, Debug)]
struct ReplayCmd {
    /// Manifest written by an earlier run
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory (default: the manifest's directory)
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

macro_rules! put {
    ($kv:expr, $src:expr; $($field:ident),* $(,)?) => {
        $( if let Some(v) = &$src.$field { $kv.set(stringify!($field), v.to_string_lossy_value()); } )*
    };
}

trait FlagValue {
    fn to_string_lossy_value(&self) -> String;
}

impl<T: std::fmt::Display> FlagValue for T {
    fn to_string_lossy_value(&self) -> String {
        self.to_string()
    }
}

fn path_str(p: &std::path::Path) -> String {
    p.to_string_lossy().into_owned()
}

impl Common {
    fn put(&self, kv: &mut KvConfig) {
        if let Some(d) = &self.output_dir {
            kv.set("output_dir", path_str(d));
        }
    }
}

impl PenaltyArgs {
    fn put(&self, kv: &mut KvConfig) {
        put!(kv, self; penalty, lambda, tau, h, gamma, a);
    }
}

impl SolverArgs {
    fn put(&self, kv: &mut KvConfig) {
        put!(kv, self; algorithm, max_sweeps, tol, order, seed, kkt_tol, lla_iters, n_lambda, lambda_min_ratio);
    }
}

impl ScenarioArgs {
    fn put(&self, kv: &mut KvConfig) {
        put!(kv, self; n, p, k, rho, snr, test_size);
        if let Some(s) = self.data_seed {
            kv.set("data_seed", s);
        }
    }
}

impl DataCmd {
    fn settings(&self) -> CliResult<Settings> {
        let mut kv = KvConfig::new();
        self.common.put(&mut kv);
        if let Some(i) = &self.input {
            kv.set("input", path_str(i));
        }
        self.penalty.put(&mut kv);
        self.solver.put(&mut kv);
        put!(kv, self; folds);
        Settings::new(&kv, self.common.config.as_deref())
    }
}

fn scenario_settings(common: &Common, scenario: &ScenarioArgs, extra: KvConfig) -> CliResult<Settings> {
    let mut kv = extra;
    common.put(&mut kv);
    scenario.put(&mut kv);
    let mut s = Settings::new(&kv, common.config.as_deref())?;
    if let Some(path) = &scenario.scenario {
        let file = KvConfig::from_file(path).map_err(|e| error::input(format!("scenario {}: {e}", path.display())))?;
        // A scenario file's `seed` is the dataset seed.
        let mut renamed = KvConfig::new();
        for (k, v) in file.iter() {
            renamed.set(if k == "seed" { "data_seed" } else { k }, v);
        }
        s.layer_under(&renamed);
    }
    Ok(s)
}

fn dispatch(command: &str, settings: Settings) -> CliResult<()> {
    match command {
        "fit" => commands::fit::run(settings),
        "path" => commands::path::run(settings),
        "cv" => commands::cv::run(settings),
        "bench" => commands::bench::run(settings),
        "calibrate" => commands::calibrate::run(settings),
        "simulate" => commands::simulate::run(settings),
        other => Err(error::input(format!("unknown command {other:?}"))),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Fit(c) => dispatch("fit", c.settings()?),
        Command::Path(c) => dispatch("path", c.settings()?),
        Command::Cv(c) => dispatch("cv", c.settings()?),
        Command::Bench(c) => {
            let mut kv = KvConfig::new();
            put!(kv, c; methods, reps, tau_sweep, jobs);
            c.penalty.put(&mut kv);
            c.solver.put(&mut kv);
            dispatch("bench", scenario_settings(&c.common, &c.scenario, kv)?)
        }
        Command::Calibrate(c) => {
            let mut kv = KvConfig::new();
            c.common.put(&mut kv);
            put!(kv, c; rule, n, p, sigma, alpha, family, h, epsilon_prior);
            if c.high_dim {
                kv.set("high_dim", true);
            }
            dispatch("calibrate", Settings::new(&kv, c.common.config.as_deref())?)
        }
        Command::Simulate(c) => dispatch("simulate", scenario_settings(&c.common, &c.scenario, KvConfig::new())?),
        Command::Replay(r) => {
            let manifest = KvConfig::from_file(&r.manifest)
                .map_err(|e| error::input(format!("manifest {}: {e}", r.manifest.display())))?;
            let command = manifest
                .get_str("command")
                .ok_or_else(|| error::input(format!("manifest {} has no command", r.manifest.display())))?
                .to_string();
            if let Some(v) = manifest.get_str("version") {
                if v != env!("CARGO_PKG_VERSION") {
                    eprintln!("warning: manifest written by version {v}, replaying with {}", env!("CARGO_PKG_VERSION"));
                }
            }
            let mut flags = KvConfig::new();
            let dir = match &r.output_dir {
                Some(d) => d.clone(),
                None => r.manifest.parent().map(PathBuf::from).unwrap_or_default(),
            };
            flags.set("output_dir", path_str(&dir));
            let mut s = Settings::new(&flags, None)?;
            s.layer_under(&manifest);
            dispatch(&command, s)
        }
    }
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
