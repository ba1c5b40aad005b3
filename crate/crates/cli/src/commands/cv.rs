use twinreg::kvconfig::KvConfig;
use twinreg::solver::{fit_path, PathConfig};
use twinreg::tuning::{cross_validate, CvConfig};

use super::fit::{describe_fit, write_coefficients};
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
    let folds = s.get("folds", 10usize)?;
    let manifest = s.finish("cv")?;

    let prob = prepare(&raw, &names)?;
    let scale = prob.sample_scale();
    let internal = template.rescaled(scale)?;
    let cv_cfg = CvConfig { folds, seed: cfg.rng_seed, path: pc.clone(), solver: cfg.clone(), algorithm };
    let cv = cross_validate(&raw, &internal, &cv_cfg)?;
    for w in &cv.warnings {
        eprintln!("warning: {w}");
    }

    let mut curve = out.csv("cv.csv")?;
    curve.write_record(["index", "lambda", "cv_error", "cv_se"])?;
    for (i, ((l, e), se)) in cv.lambdas.iter().zip(&cv.cv_curve).zip(&cv.cv_se).enumerate() {
        curve.write_record([i.to_string(), (l / scale).to_string(), e.to_string(), se.to_string()])?;
    }
    curve.flush().map_err(csv::Error::from)?;

    // Refit along the grid down to the chosen level so warm starts match the path.
    let refit_grid = PathConfig { lambdas: Some(cv.lambdas[..=cv.best_index].to_vec()), ..pc };
    let path = fit_path(&prob, &internal, &refit_grid, &cfg, algorithm)?;
    let best = path.fits.last().expect("nonempty grid");
    write_coefficients(&out, "coefficients.csv", &prob, &names, &best.beta)?;

    let mut summary = KvConfig::new();
    summary.set("penalty", template.name());
    summary.set("tau", template.tau().map_or("none".to_string(), |t| t.to_string()));
    summary.set("algorithm", algorithm.name());
    summary.set("folds", folds);
    summary.set("best_index", cv.best_index);
    summary.set("best_lambda", cv.best_lambda / scale);
    summary.set("best_cv_error", cv.cv_curve[cv.best_index]);
    summary.set("warnings", cv.warnings.len());
    describe_fit(&mut summary, &names, best);
    out.text("summary.txt", &summary.render())?;
    out.manifest(&manifest)?;
    Ok(())
}
