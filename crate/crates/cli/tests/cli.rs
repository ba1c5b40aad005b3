use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use twinreg::dataio::read_labeled_csv;
use twinreg::penalty::PenaltySpec;
use twinreg::solver::kkt_check;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fixture_60x200.csv")
}

fn twinreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twinreg")).args(args).output().expect("spawn twinreg")
}

fn ok(args: &[&str]) -> Output {
    let out = twinreg(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read_coefficients(path: &Path) -> Vec<(String, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["variable", "coefficient"]);
    r.records().map(|rec| {
        let rec = rec.unwrap();
        (rec[0].to_string(), rec[1].parse().unwrap())
    }).collect()
}

fn kv(path: &Path) -> twinreg::kvconfig::KvConfig {
    twinreg::kvconfig::KvConfig::from_file(path).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fit_output_passes_kkt_when_reloaded() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture();
    ok(&["fit", "--input", s(&input), "--penalty", "twin-a", "--tau", "0.1", "--lambda", "0.5", "--output-dir", s(dir.path())]);
    let coefs = read_coefficients(&dir.path().join("coefficients.csv"));
    assert_eq!(coefs.len(), 201);
    assert_eq!(coefs[0].0, "(intercept)");

    let (raw, _) = read_labeled_csv(&input).unwrap();
    let prob = raw.center().standardize().unwrap();
    let original: Vec<f64> = coefs[1..].iter().map(|c| c.1).collect();
    let beta = prob.to_standardized_scale(&original);
    let spec = PenaltySpec::twin_a(0.5, 0.1).unwrap().rescaled(prob.sample_scale()).unwrap();
    let check = kkt_check(&prob, &spec, &beta, 1e-4).unwrap();
    assert!(check.pass, "max violation {}", check.max_violation);
    assert!((prob.intercept(&beta) - coefs[0].1).abs() < 1e-9);

    let summary = kv(&dir.path().join("summary.txt"));
    assert_eq!(summary.get_str("converged"), Some("true"));
    let n_active: usize = summary.get("n_active").unwrap().unwrap();
    assert_eq!(n_active, original.iter().filter(|b| **b != 0.0).count());
}

#[test]
fn fit_above_lambda_max_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["fit", "--input", s(&fixture()), "--penalty", "lasso", "--lambda", "1e6", "--output-dir", s(dir.path())]);
    let coefs = read_coefficients(&dir.path().join("coefficients.csv"));
    assert!(coefs[1..].iter().all(|c| c.1 == 0.0));
    assert_eq!(kv(&dir.path().join("summary.txt")).get_str("n_active"), Some("0"));
}

#[test]
fn missing_file_exits_2_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = twinreg(&["fit", "--input", "/no/such/data.csv", "--lambda", "1", "--output-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/data.csv"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "y,x1\n1,2\n3,abc\n").unwrap();
    let out = twinreg(&["fit", "--input", s(&bad), "--lambda", "1", "--output-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a number"));

    let unknown = twinreg(&["fit", "--input", s(&fixture()), "--lambda", "1", "--penalty", "ridge", "--output-dir", s(dir.path())]);
    assert_eq!(unknown.status.code(), Some(2));
    let no_lambda = twinreg(&["fit", "--input", s(&fixture()), "--output-dir", s(dir.path())]);
    assert_eq!(no_lambda.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&no_lambda.stderr).contains("--lambda"));
}

#[test]
fn nonconvergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = twinreg(&[
        "fit", "--input", s(&fixture()), "--penalty", "lasso", "--lambda", "0.05", "--max-sweeps", "1",
        "--output-dir", s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("input = {}\npenalty = mcp\nlambda = 10\n", s(&fixture()))).unwrap();
    let out_dir = dir.path().join("out");
    ok(&["fit", "--config", s(&cfg), "--lambda", "0.4", "--output-dir", s(&out_dir)]);
    let manifest = kv(&out_dir.join("manifest.txt"));
    assert_eq!(manifest.get_str("penalty"), Some("mcp"));
    assert_eq!(manifest.get_str("lambda"), Some("0.4"));
    assert_eq!(manifest.get_str("command"), Some("fit"));

    std::fs::write(&cfg, "lambda = 1\ntypo_key = 3\n").unwrap();
    let out = twinreg(&["fit", "--config", s(&cfg), "--input", s(&fixture()), "--output-dir", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo_key"));
}

#[test]
fn path_shape_and_first_block_zero() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["path", "--input", s(&fixture()), "--output-dir", s(dir.path())]);
    let mut r = csv::Reader::from_path(dir.path().join("path.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["lambda", "variable", "coefficient"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 100 * 200);
    assert!(rows[..200].iter().all(|r| r[2].parse::<f64>().unwrap() == 0.0));
    let lambdas: Vec<f64> = rows.iter().step_by(200).map(|r| r[0].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[1] < w[0]));

    let again = tempfile::tempdir().unwrap();
    ok(&["path", "--input", s(&fixture()), "--output-dir", s(again.path())]);
    for f in ["path.csv", "path_summary.csv", "manifest.txt"] {
        assert_eq!(std::fs::read(dir.path().join(f)).unwrap(), std::fs::read(again.path().join(f)).unwrap());
    }
}

#[test]
fn cv_curve_and_refit() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["cv", "--input", s(&fixture()), "--n-lambda", "30", "--folds", "5", "--output-dir", s(dir.path())]);
    let mut r = csv::Reader::from_path(dir.path().join("cv.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["index", "lambda", "cv_error", "cv_se"]);
    assert_eq!(r.records().count(), 30);
    let summary = kv(&dir.path().join("summary.txt"));
    let best: usize = summary.get("best_index").unwrap().unwrap();
    assert!(best > 0 && best < 30);
    assert_eq!(read_coefficients(&dir.path().join("coefficients.csv")).len(), 201);

    let bad = twinreg(&["cv", "--input", s(&fixture()), "--folds", "1", "--output-dir", s(dir.path())]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn calibrate_prints_key_values() {
    let out = ok(&["calibrate", "--rule", "universal-a", "--n", "2000", "--p", "1000", "--sigma", "1"]);
    let cfg = twinreg::kvconfig::KvConfig::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let lambda: f64 = cfg.get("lambda").unwrap().unwrap();
    let tau: f64 = cfg.get("tau").unwrap().unwrap();
    let (l, t) = twinreg::tuning::universal_twin_a(&twinreg::tuning::UniversalInputs::new(2000, 1000, 1.0)).unwrap();
    assert_eq!((lambda, tau), (l, t));

    let tight = twinreg(&["calibrate", "--rule", "universal-a", "--n", "1000", "--p", "1000", "--sigma", "1"]);
    assert_eq!(tight.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&tight.stderr).contains("requires n sufficiently larger than p"));

    let out = ok(&["calibrate", "--rule", "orthogonal", "--p", "256", "--sigma", "1", "--alpha", "0.2"]);
    let cfg = twinreg::kvconfig::KvConfig::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let gap: f64 = cfg.get("gap").unwrap().unwrap();
    let min_gap: f64 = cfg.get("min_gap").unwrap().unwrap();
    assert!((gap - min_gap).abs() <= 1e-8 * gap);
}

#[test]
fn simulate_round_trips_through_dataio() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["simulate", "--n", "40", "--p", "30", "--k", "4", "--data-seed", "9", "--output-dir", s(dir.path())]);
    let (ds, sc) = twinreg::simulate::read_dataset(&dir.path().join("dataset.csv"), &dir.path().join("dataset.json")).unwrap();
    assert_eq!((sc.n, sc.p, sc.k, sc.seed), (40, 30, 4, 9));
    let direct = twinreg::simulate::generate_dataset(&sc).unwrap();
    assert_eq!(ds.problem, direct.problem);
    assert_eq!(ds.beta_true, direct.beta_true);
}

fn small_scenario(dir: &Path) -> PathBuf {
    let p = dir.join("scenario.txt");
    std::fs::write(&p, "n = 60\np = 80\nrho = -0.5\nk = 4\nsnr = 8\nseed = 5\ntest_size = 200\n").unwrap();
    p
}

#[test]
fn bench_reports_all_methods() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let out_dir = dir.path().join("out");
    ok(&["bench", "--scenario", s(&sc), "--reps", "2", "--n-lambda", "8", "--output-dir", s(&out_dir)]);
    let report = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let mut methods: Vec<&str> = report.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    methods.dedup();
    assert_eq!(methods, ["lasso", "mcp", "scad", "twin-a:cd", "twin-a:mclla", "twin-b:cd", "twin-b:mclla"]);
    assert_eq!(report.lines().count(), 1 + 7 * 8);
    assert_eq!(kv(&out_dir.join("manifest.txt")).get_str("data_seed"), Some("5"));
}

#[test]
fn bench_tau_sweep_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let out_dir = dir.path().join("out");
    ok(&[
        "bench", "--scenario", s(&sc), "--reps", "1", "--n-lambda", "5", "--methods", "twin-a", "--tau-sweep",
        "0.1,0.25,0.5", "--output-dir", s(&out_dir),
    ]);
    let report = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let mut methods: Vec<&str> = report.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    methods.dedup();
    assert_eq!(methods, ["twin-a:cd:tau=0.1", "twin-a:cd:tau=0.25", "twin-a:cd:tau=0.5"]);

    let zero = twinreg(&["bench", "--scenario", s(&sc), "--reps", "0", "--output-dir", s(&out_dir)]);
    assert_eq!(zero.status.code(), Some(2));
    let invalid = twinreg(&["bench", "--scenario", s(&sc), "--k", "500", "--output-dir", s(&out_dir)]);
    assert_eq!(invalid.status.code(), Some(2));
}

#[test]
fn replay_defaults_to_manifest_directory() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["fit", "--input", s(&fixture()), "--penalty", "scad", "--lambda", "0.3", "--output-dir", s(dir.path())]);
    let before = std::fs::read(dir.path().join("coefficients.csv")).unwrap();
    std::fs::remove_file(dir.path().join("coefficients.csv")).unwrap();
    ok(&["replay", "--manifest", s(&dir.path().join("manifest.txt"))]);
    assert_eq!(std::fs::read(dir.path().join("coefficients.csv")).unwrap(), before);
}
