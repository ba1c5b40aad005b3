use twinreg::solver::fit_path;

use super::{load_input, output_dir, path_config, penalty, prepare, solver, algorithm};
use crate::error::CliResult;
use crate::settings::Settings;

pub fn run(mut s: Settings) -> CliResult<()> {
    let out = output_dir(&mut s, true)?.expect("required");
    let (raw, names) = load_input(&mut s)?;
    let template = penalty(&mut s, false)?;
    let algorithm = algorithm(&mut s)?;
    let cfg = solver(&mut s)?;
    let pc = path_config(&mut s)?;
    let manifest = s.finish("path")?;

    let prob = prepare(&raw, &names)?;
    let scale = prob.sample_scale();
    let path = fit_path(&prob, &template.rescaled(scale)?, &pc, &cfg, algorithm)?;

    let mut long = out.csv("path.csv")?;
    long.write_record(["lambda", "variable", "coefficient"])?;
    let mut summary = out.csv("path_summary.csv")?;
    summary.write_record(["index", "lambda", "n_active", "intercept", "objective", "kkt_max_violation", "converged"])?;
    let mut unconverged = 0;
    for (i, (lambda, f)) in path.lambdas.iter().zip(&path.fits).enumerate() {
        let lam = (lambda / scale).to_string();
        for (name, b) in names.iter().zip(prob.to_original_scale(&f.beta)) {
            long.write_record([lam.as_str(), name, &b.to_string()])?;
        }
        summary.write_record([
            i.to_string(),
            lam,
            f.active_set.len().to_string(),
            prob.intercept(&f.beta).to_string(),
            f.objective.to_string(),
            f.kkt_max_violation.to_string(),
            f.converged.to_string(),
        ])?;
        unconverged += usize::from(!f.converged);
    }
    long.flush().map_err(csv::Error::from)?;
    summary.flush().map_err(csv::Error::from)?;
    out.manifest(&manifest)?;
    if unconverged > 0 {
        eprintln!("warning: {unconverged} of {} fits did not converge", path.fits.len());
    }
    Ok(())
}
