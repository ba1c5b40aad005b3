use twinreg::simulate::{generate_dataset, write_dataset};

use super::{output_dir, scenario};
use crate::error::CliResult;
use crate::settings::Settings;

pub fn run(mut s: Settings) -> CliResult<()> {
    let out = output_dir(&mut s, true)?.expect("required");
    let sc = scenario(&mut s)?;
    let manifest = s.finish("simulate")?;
    let data = generate_dataset(&sc)?;
    write_dataset(&data, &sc, &out.path("dataset.csv"), &out.path("dataset.json"))?;
    out.manifest(&manifest)?;
    Ok(())
}
