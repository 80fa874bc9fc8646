use std::fs;
use std::process::Command;

use pathint_cli::{list_experiments, run, CliError, ExperimentConfig};

fn config(experiment: &str, dir: &std::path::Path, params: &[(&str, &str)]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(experiment);
    cfg.output_dir = dir.to_path_buf();
    for (k, v) in params {
        cfg.params.insert(k.to_string(), v.to_string());
    }
    cfg
}

#[test]
fn unknown_experiment_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = run(&config("nope", dir.path(), &[])).unwrap_err();
    assert!(matches!(err, CliError::UnknownExperiment(ref n) if n == "nope"), "{err}");
}

#[test]
fn unknown_and_mistyped_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = run(&config("spectrum", dir.path(), &[("omegaa", "1")])).unwrap_err();
    assert!(matches!(err, CliError::UnknownKey { .. }), "{err}");
    let err = run(&config("spectrum", dir.path(), &[("N", "many")])).unwrap_err();
    assert!(matches!(err, CliError::InvalidParam { .. }), "{err}");
}

#[test]
fn listing_is_sorted_and_complete() {
    let list = list_experiments();
    let names: Vec<&str> = list.iter().map(|e| e.0).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert!(names.contains(&"feynman-kac"));
    assert_eq!(names.len(), 9);
    let gff = list.iter().find(|e| e.0 == "gff-cov").unwrap();
    for key in ["L", "a", "m"] {
        assert!(gff.1.iter().any(|p| p.name == key), "gff-cov lacks {key}");
    }
    assert!(list.iter().all(|e| !e.2.is_empty()));
}

#[test]
fn spectrum_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = run(&config("spectrum", dir.path(), &[])).unwrap();
    assert!(report.passed());
    assert!(report.metric("max_abs_error").unwrap().value < 1e-8);
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,eigenvalue,exact,abs_error");
    assert_eq!(lines.len(), 11);
    let text = fs::read_to_string(dir.path().join("spectrum_report.txt")).unwrap();
    assert_eq!(text, report.to_text());
    assert!(!text.contains("wall_time"));
}

#[test]
fn wick_moments_fourth_moment() {
    let dir = tempfile::tempdir().unwrap();
    let report = run(&config("wick-moments", dir.path(), &[])).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    let csv = fs::read_to_string(dir.path().join("wick_moments.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "3");
    assert_eq!(row[3].parse::<f64>().unwrap(), 3.0);
}

#[test]
fn same_seed_gives_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let params = [("paths", "2000")];
    let ra = run(&config("wiener-cov", a.path(), &params)).unwrap();
    run(&config("wiener-cov", b.path(), &params)).unwrap();
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("wiener_cov.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let c = tempfile::tempdir().unwrap();
    let mut other = config("wiener-cov", c.path(), &params);
    other.seed = 2;
    run(&other).unwrap();
    assert_ne!(read(&a), fs::read(c.path().join("wiener_cov.csv")).unwrap());
    assert_eq!(ra.artifacts.len(), 2);
}

#[test]
fn unwritable_output_dir_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let err = run(&config("spectrum", &file, &[])).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }), "{err}");
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pathint"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("spectrum.ini");
    fs::write(&ini, "# oscillator\nexperiment = spectrum\nN = 200\n").unwrap();
    let out = binary()
        .args(["run", "--config"])
        .arg(&ini)
        .args(["--count", "5"])
        .env("PATHINT_OUTPUT_DIR", dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("count = 5"));
    assert!(dir.path().join("out/spectrum.csv").exists());

    // a failing metric gives exit code 2
    let fk = dir.path().join("fk.ini");
    fs::write(&fk, "experiment = feynman-kac\npaths = 2000\nsteps = 40\ntolerance = 0\n").unwrap();
    let out = binary()
        .args(["run", "--config"])
        .arg(&fk)
        .args(["--output_dir"])
        .arg(dir.path().join("fk"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = dir.path().join("bad.ini");
    fs::write(&bad, "experiment = nope\n").unwrap();
    let out = binary().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = binary().args(["run", "--config"]).arg(&ini).args(["--bogus", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = binary().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("feynman-kac"));
}
