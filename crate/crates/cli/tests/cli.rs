use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sgdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgdp")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = sgdp(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_writes_the_default_dataset() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["simulate", "--out", p(dir.path())]);
    let obs = fs::read_to_string(dir.path().join("observations.csv")).unwrap();
    assert_eq!(obs.lines().next().unwrap(), "area_id,day_index,hour_index,value");
    assert_eq!(obs.lines().count(), 1 + 40 * 15 * 24);
    assert_eq!(fs::read_to_string(dir.path().join("calendar.csv")).unwrap().lines().count(), 16);
    assert!(dir.path().join("adjacency.csv").exists());
    let truth = json(&dir.path().join("truth.json"));
    assert_eq!(truth["labels"].as_array().unwrap().len(), 40);
    assert_eq!(truth["true_means"][0].as_array().unwrap().len(), 24);
}

#[test]
fn simulate_is_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ok(&["simulate", "--out", p(a.path()), "--seed", "7"]);
    ok(&["simulate", "--out", p(b.path()), "--seed", "7"]);
    for f in ["observations.csv", "calendar.csv", "adjacency.csv", "truth.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn zero_day_config_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(&cfg, r#"{"n_days": 0}"#).unwrap();
    let out = sgdp(&["simulate", "--config", p(&cfg), "--out", p(&dir.path().join("data"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_config_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(&cfg, "{").unwrap();
    assert_eq!(sgdp(&["simulate", "--config", p(&cfg), "--out", p(dir.path())]).status.code(), Some(2));
}

fn small_dataset(dir: &Path) {
    let cfg = dir.join("sim.json");
    fs::write(&cfg, r#"{"n_areas": 8, "n_groups": 2, "group_size": 4, "n_days": 3, "grid_len": 6}"#).unwrap();
    ok(&["simulate", "--config", p(&cfg), "--out", p(&dir.join("data"))]);
}

fn fit_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let cfg = dir.join("fit.json");
    fs::write(&cfg, body).unwrap();
    cfg
}

#[test]
fn simulate_fit_metrics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let cfg = fit_config(dir.path(), r#"{"burn_in": 30, "samples": 40, "thin": 2, "record_points": [0, 3]}"#);
    let fit = dir.path().join("fit");
    ok(&["fit", "--data", p(&dir.path().join("data")), "--config", p(&cfg), "--out", p(&fit), "--chains", "2", "--threads", "2"]);

    let manifest = json(&fit.join("manifest.json"));
    assert_eq!(manifest["chains"], 2);
    assert_eq!(manifest["model"], "sgdp");
    assert_eq!(manifest["config"]["burn_in"], 30);
    assert_eq!(manifest["input_hash"].as_str().unwrap().len(), 64);
    assert!(!fit.join("manifest.json.tmp").exists());

    for c in 0..2 {
        let chain = fit.join(format!("chain_{c}"));
        let draws = fs::read_to_string(chain.join("draws.csv")).unwrap();
        assert_eq!(draws.lines().count(), 1 + 20);
        assert!(draws.lines().next().unwrap().contains("tau[0]"));
        let parts = fs::read_to_string(chain.join("partitions.csv")).unwrap();
        assert_eq!(parts.lines().count(), 1 + 20);
        assert_eq!(parts.lines().next().unwrap().split(',').count(), 2 + 8);
        assert_eq!(fs::read_to_string(chain.join("means.csv")).unwrap().lines().count(), 1 + 8 * 6);
        assert!(chain.join("atoms.csv").exists());
        let summary = json(&chain.join("summary.json"));
        assert_eq!(summary["n_draws"], 20);
        assert_eq!(summary["periods"][0]["alpha"]["q"].as_array().unwrap().len(), 5);
        let total: f64 = summary["periods"][0]["k_distribution"]
            .as_object()
            .unwrap()
            .values()
            .map(|v| v.as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
    assert_ne!(
        fs::read(fit.join("chain_0/draws.csv")).unwrap(),
        fs::read(fit.join("chain_1/draws.csv")).unwrap()
    );

    let out = ok(&["metrics", "--data", p(&fit), "--truth", p(&dir.path().join("data/truth.json"))]);
    let m: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["ari", "purity", "rmse"] {
        assert!(m[key].as_f64().unwrap().is_finite(), "{key}");
    }
    assert!(m["purity"].as_f64().unwrap() > 0.0);

    let out = ok(&["summarize", "--data", p(&fit)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chain 1"));
    assert!(text.contains("pooled K distribution"));
}

#[test]
fn fits_are_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let cfg = fit_config(dir.path(), r#"{"burn_in": 5, "samples": 10}"#);
    let data = dir.path().join("data");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["fit", "--data", p(&data), "--config", p(&cfg), "--out", p(&a), "--chains", "2", "--threads", "1"]);
    ok(&["fit", "--data", p(&data), "--config", p(&cfg), "--out", p(&b), "--chains", "2", "--threads", "2"]);
    for f in ["chain_0/draws.csv", "chain_1/partitions.csv", "chain_1/summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(json(&a.join("manifest.json"))["input_hash"], json(&b.join("manifest.json"))["input_hash"]);
}

#[test]
fn gdp_fits_have_no_tau_column() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let cfg = fit_config(dir.path(), r#"{"burn_in": 2, "samples": 4}"#);
    let fit = dir.path().join("fit");
    ok(&["fit", "--data", p(&dir.path().join("data")), "--config", p(&cfg), "--out", p(&fit), "--model", "gdp"]);
    let draws = fs::read_to_string(fit.join("chain_0/draws.csv")).unwrap();
    assert!(!draws.contains("tau"));
    assert!(json(&fit.join("chain_0/summary.json"))["periods"][0]["tau"].is_null());
}

#[test]
fn sdp_with_its_priors_and_standardized_curves() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let cfg = fit_config(dir.path(), r#"{"burn_in": 2, "samples": 4}"#);
    let fit = dir.path().join("fit");
    let data = dir.path().join("data");
    ok(&["fit", "--data", p(&data), "--config", p(&cfg), "--out", p(&fit), "--model", "sdp", "--priors", "sdp", "--standardize"]);
    let m = json(&fit.join("manifest.json"));
    assert_eq!(m["model"], "sdp");
    assert_eq!(m["standardize"], true);
    assert_eq!(m["config"]["priors"]["alpha"]["shape"], 1.0);
}

#[test]
fn zero_samples_write_empty_outputs() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let cfg = fit_config(dir.path(), r#"{"burn_in": 2, "samples": 0}"#);
    let fit = dir.path().join("fit");
    ok(&["fit", "--data", p(&dir.path().join("data")), "--config", p(&cfg), "--out", p(&fit)]);
    assert_eq!(fs::read_to_string(fit.join("chain_0/draws.csv")).unwrap().lines().count(), 1);
    let out = sgdp(&["metrics", "--data", p(&fit), "--truth", p(&dir.path().join("data/truth.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_inputs_are_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let data = dir.path().join("data");
    let fit = dir.path().join("fit");
    let bad = fit_config(dir.path(), r#"{"thin": 0}"#);
    assert_eq!(sgdp(&["fit", "--data", p(&data), "--config", p(&bad), "--out", p(&fit)]).status.code(), Some(2));
    assert_eq!(sgdp(&["fit", "--data", p(&data), "--out", p(&fit), "--priors", "prior9"]).status.code(), Some(2));
    assert_eq!(sgdp(&["fit", "--data", p(&data), "--out", p(&fit), "--model", "pyp"]).status.code(), Some(2));
    fs::write(data.join("adjacency.csv"), "area_a,area_b\n0,99\n").unwrap();
    assert_eq!(sgdp(&["fit", "--data", p(&data), "--out", p(&fit)]).status.code(), Some(2));
}
