use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::generate::SimDataset;
use super::scenario::SimScenario;
use crate::error::{Error, Result};
use crate::kvconfig::KvConfig;
use crate::dataio::read_problem_csv;

/// Sidecar metadata written next to an exported dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub seed: u64,
    pub sigma: f64,
    /// Absent when the data are noiseless.
    pub snr_realized: Option<f64>,
    pub beta_true: Vec<f64>,
    pub active_true: Vec<usize>,
    pub scenario: BTreeMap<String, String>,
}

impl DatasetMetadata {
    pub fn scenario(&self) -> Result<SimScenario> {
        let mut kv = KvConfig::new();
        for (k, v) in &self.scenario {
            kv.set(k, v);
        }
        SimScenario::from_kv(&kv)
    }
}

/// Write `dataset` as CSV (`y,x1..xp`; shortest round-trip float formatting)
/// plus a JSON sidecar.
pub fn write_dataset(dataset: &SimDataset, scenario: &SimScenario, csv_path: &Path, json_path: &Path) -> Result<()> {
    let prob = &dataset.problem;
    let (n, p) = (prob.n(), prob.p());
    let io = |e: std::io::Error, path: &Path| Error::Io(format!("{}: {e}", path.display()));
    let file = File::create(csv_path).map_err(|e| io(e, csv_path))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = Vec::with_capacity(p + 1);
    header.push("y".to_string());
    header.extend((1..=p).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    let x = prob.x();
    let mut rec = Vec::with_capacity(p + 1);
    for i in 0..n {
        rec.clear();
        rec.push(prob.y()[i].to_string());
        rec.extend((0..p).map(|j| x.get(i, j).to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;

    let meta = DatasetMetadata {
        seed: dataset.seed,
        sigma: dataset.sigma,
        snr_realized: dataset.snr_realized.is_finite().then_some(dataset.snr_realized),
        beta_true: dataset.beta_true.clone(),
        active_true: dataset.active_true.clone(),
        scenario: scenario.to_kv().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
    };
    let file = File::create(json_path).map_err(|e| io(e, json_path))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &meta)?;
    Ok(())
}

/// Inverse of [`write_dataset`].
pub fn read_dataset(csv_path: &Path, json_path: &Path) -> Result<(SimDataset, SimScenario)> {
    let problem = read_problem_csv(csv_path)?;
    let file = File::open(json_path).map_err(|e| Error::Io(format!("{}: {e}", json_path.display())))?;
    let meta: DatasetMetadata = serde_json::from_reader(BufReader::new(file))?;
    if meta.beta_true.len() != problem.p() {
        return Err(Error::DimensionMismatch { expected: problem.p(), got: meta.beta_true.len() });
    }
    let scenario = meta.scenario()?;
    let ds = SimDataset {
        problem,
        beta_true: meta.beta_true,
        active_true: meta.active_true,
        sigma: meta.sigma,
        snr_realized: meta.snr_realized.unwrap_or(f64::INFINITY),
        seed: meta.seed,
    };
    Ok((ds, scenario))
}
