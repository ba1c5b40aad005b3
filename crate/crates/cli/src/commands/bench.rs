use twinreg::simulate::{run_replications, MethodSpec, ReplicationConfig};
use twinreg::solver::Algorithm;

use super::{output_dir, path_config, scenario, solver, Shapes};
use crate::error::{input, CliResult};
use crate::settings::Settings;

const DEFAULT_METHODS: [&str; 7] = ["twin-a:cd", "twin-a:mclla", "twin-b:cd", "twin-b:mclla", "lasso", "mcp", "scad"];

fn parse_methods(list: &[String], shapes: &Shapes, sweep: Option<&[f64]>) -> CliResult<Vec<MethodSpec>> {
    let mut methods = Vec::new();
    for item in list {
        let (family, algorithm) = match item.split_once(':') {
            Some((f, a)) => (f, a.parse::<Algorithm>()?),
            None => (item.as_str(), Algorithm::Cd),
        };
        let base = shapes.spec(family, 1.0)?;
        match sweep {
            Some(taus) if base.is_twin() => {
                for &tau in taus {
                    let spec = Shapes { tau, ..*shapes }.spec(family, 1.0)?;
                    let mut m = MethodSpec::new(spec, algorithm);
                    m.label = format!("{}:{}:tau={tau}", family, algorithm.name());
                    methods.push(m);
                }
            }
            _ => methods.push(MethodSpec::new(base, algorithm)),
        }
    }
    let mut labels: Vec<&str> = methods.iter().map(|m| m.label.as_str()).collect();
    labels.sort_unstable();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(input(format!("method {:?} listed twice", w[0])));
    }
    Ok(methods)
}

pub fn run(mut s: Settings) -> CliResult<()> {
    let out = output_dir(&mut s, true)?.expect("required");
    let sc = scenario(&mut s)?;
    let defaults: Vec<String> = DEFAULT_METHODS.iter().map(|m| m.to_string()).collect();
    let list: Vec<String> = s.list("methods", &defaults)?;
    let shapes = Shapes::read(&mut s)?;
    let sweep: Option<Vec<f64>> = if s.given().contains("tau_sweep") { Some(s.list("tau_sweep", &[])?) } else { None };
    let n_reps = s.get("reps", 20usize)?;
    let jobs: Option<usize> = s.opt("jobs")?;
    let solver = solver(&mut s)?;
    let path = path_config(&mut s)?;
    let manifest = s.finish("bench")?;

    if n_reps == 0 {
        return Err(input("reps must be at least 1"));
    }
    if jobs == Some(0) {
        return Err(input("jobs must be at least 1"));
    }
    let methods = parse_methods(&list, &shapes, sweep.as_deref())?;
    let cfg = ReplicationConfig { n_reps, path, solver, jobs };
    let report = run_replications(&sc, &methods, &cfg)?;
    out.report("report.csv", &report)?;
    out.manifest(&manifest)?;
    Ok(())
}
