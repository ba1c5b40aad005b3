use twinreg::kvconfig::KvConfig;
use twinreg::solver::{fit, FitResult, Problem};

use super::{fmt_names, load_input, output_dir, penalty, prepare, solver, algorithm};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::settings::Settings;

pub fn run(mut s: Settings) -> CliResult<()> {
    let out = output_dir(&mut s, true)?.expect("required");
    let (raw, names) = load_input(&mut s)?;
    let template = penalty(&mut s, true)?;
    let algorithm = algorithm(&mut s)?;
    let cfg = solver(&mut s)?;
    let manifest = s.finish("fit")?;

    let prob = prepare(&raw, &names)?;
    let spec = template.rescaled(prob.sample_scale())?;
    let result = fit(&prob, &spec, &cfg, algorithm, None)?;
    write_coefficients(&out, "coefficients.csv", &prob, &names, &result.beta)?;

    let mut summary = KvConfig::new();
    summary.set("penalty", template.name());
    summary.set("lambda", template.lambda());
    summary.set("tau", template.tau().map_or("none".to_string(), |t| t.to_string()));
    summary.set("algorithm", algorithm.name());
    describe_fit(&mut summary, &names, &result);
    out.text("summary.txt", &summary.render())?;
    out.manifest(&manifest)?;
    if !result.converged {
        return Err(CliError::Solver(format!(
            "solver did not converge in {} sweeps (max KKT violation {})",
            result.sweeps_used, result.kkt_max_violation
        )));
    }
    Ok(())
}

/// Original-scale coefficients with the intercept first.
pub fn write_coefficients(out: &OutputDir, file: &str, prob: &Problem, names: &[String], beta: &[f64]) -> CliResult<()> {
    let mut w = out.csv(file)?;
    w.write_record(["variable", "coefficient"])?;
    w.write_record(["(intercept)", &prob.intercept(beta).to_string()])?;
    for (name, b) in names.iter().zip(prob.to_original_scale(beta)) {
        w.write_record([name.as_str(), &b.to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Objective and KKT violation are for the centered unit-norm columns.
pub fn describe_fit(summary: &mut KvConfig, names: &[String], f: &FitResult) {
    summary.set("objective", f.objective);
    summary.set("kkt_max_violation", f.kkt_max_violation);
    summary.set("converged", f.converged);
    summary.set("sweeps_used", f.sweeps_used);
    summary.set("n_active", f.active_set.len());
    summary.set("active_set", fmt_names(names, &f.active_set));
}
