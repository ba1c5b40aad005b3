use twinreg::kvconfig::KvConfig;
use twinreg::tuning::{
    calibrate_orthogonal, universal_twin_a, universal_twin_b, CalibrationTarget, TwinFamily, UniversalInputs,
};

use super::output_dir;
use crate::error::{input, CliResult};
use crate::settings::Settings;

/// Prints `key = value` lines; values are for unit-norm columns.
pub fn run(mut s: Settings) -> CliResult<()> {
    let out = output_dir(&mut s, false)?;
    let rule: String = s.get("rule", "universal-a".to_string())?;
    let mut result = KvConfig::new();
    result.set("rule", &rule);
    match rule.as_str() {
        "universal-a" | "universal-b" => {
            let mut inputs = UniversalInputs::new(s.required("n")?, s.required("p")?, s.required("sigma")?);
            let (lambda, tau) = if rule == "universal-a" {
                universal_twin_a(&inputs)?
            } else {
                let high_dim = s.get("high_dim", false)?;
                if high_dim {
                    inputs.epsilon_prior = Some(s.required("epsilon_prior")?);
                }
                universal_twin_b(&inputs, high_dim)?
            };
            result.set("lambda", lambda);
            result.set("tau", tau);
        }
        "orthogonal" => {
            let target = CalibrationTarget::new(s.get("alpha", 0.2)?, s.required("p")?, s.required("sigma")?)?;
            let family: String = s.get("family", "twin-a".to_string())?;
            let family = match family.as_str() {
                "twin-a" => TwinFamily::A,
                "twin-b" => TwinFamily::B { h: s.get("h", 0.5)? },
                other => return Err(input(format!("unknown family {other:?} (expected twin-a or twin-b)"))),
            };
            let spec = calibrate_orthogonal(&target, family)?;
            result.set("gap", target.gap()?);
            result.set("lambda", spec.lambda());
            result.set("tau", spec.tau().expect("twin penalty"));
            result.set("min_gap", spec.min_gap());
        }
        other => return Err(input(format!("unknown rule {other:?} (expected universal-a, universal-b or orthogonal)"))),
    }
    let manifest = s.finish("calibrate")?;
    let text = result.render();
    print!("{text}");
    if let Some(out) = out {
        out.text("calibration.txt", &text)?;
        out.manifest(&manifest)?;
    }
    Ok(())
}
