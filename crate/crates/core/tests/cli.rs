mod common;

use std::fs;
use std::path::Path;
use std::process::Output;

use ck_lattice::field_io::read_field_csv;
use ck_lattice::LatticeGrid;
use common::{binary, golden};
use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn run_into(dir: &Path, args: &str) -> Output {
    let mut all: Vec<&str> = args.split_whitespace().collect();
    let out = dir.to_str().unwrap();
    all.extend(["--out", out]);
    run(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn zero_steps_reproduce_the_delta_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let o = run_into(dir.path(), "--dim 1 --points 4 --steps 0 --initial delta");
    assert_eq!(code(&o), 0);
    assert_eq!(csv_files(dir.path()), ["psi_0000.csv"]);
    assert_eq!(
        fs::read(dir.path().join("psi_0000.csv")).unwrap(),
        fs::read(golden("delta_1d_steps0.csv")).unwrap()
    );
}

#[test]
fn zero_steps_reproduce_a_gaussian_for_every_solver() {
    for solver in ["spectral", "leapfrog", "series:20", "convolution", "subordination:40,64,256"] {
        let dir = TempDir::new().unwrap();
        let args = format!("--dim 2 --points 4 --steps 0 --initial gaussian:1.5 --solver {solver}");
        assert_eq!(code(&run_into(dir.path(), &args)), 0, "{solver}");
        assert_eq!(
            fs::read(dir.path().join("psi_0000.csv")).unwrap(),
            fs::read(golden("gaussian_2d_steps0.csv")).unwrap(),
            "{solver}"
        );
    }
}

#[test]
fn spectral_run_matches_the_stored_result() {
    let dir = TempDir::new().unwrap();
    let o = run_into(dir.path(), "--points 8 --tau 0.2 --steps 3 --initial delta --solver spectral");
    assert_eq!(code(&o), 0);
    let grid = LatticeGrid::new(1, 8, 1.0).unwrap();
    let read = |p: &Path| read_field_csv(grid, std::io::BufReader::new(fs::File::open(p).unwrap())).unwrap();
    let got = read(&dir.path().join("psi_0003.csv"));
    let stored = read(&golden("delta_1d_spectral_step3.csv"));
    assert!(got.distance(&stored).unwrap() <= 1e-14);
}

#[test]
fn identical_invocations_write_identical_files() {
    let args = "--points 8 --tau 0.2 --steps 4 --initial gaussian:1.5 --solver convolution --emit-kernel --manifest";
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(code(&run_into(a.path(), args)), 0);
    assert_eq!(code(&run_into(b.path(), args)), 0);
    let names = csv_files(a.path());
    assert_eq!(names, csv_files(b.path()));
    assert!(names.contains(&"kernel_0004.csv".to_string()));
    for name in &names {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let files = |d: &Path| -> Value {
        let m: Value = serde_json::from_slice(&fs::read(d.join("manifest.json")).unwrap()).unwrap();
        m["files"].clone()
    };
    assert_eq!(files(a.path()), files(b.path()));
}

#[test]
fn manifest_checksums_match_the_files() {
    let dir = TempDir::new().unwrap();
    let o = run_into(dir.path(), "--points 8 --steps 2 --solver leapfrog --emit-kernel --manifest");
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    let files = m["files"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    for f in files {
        let bytes = fs::read(dir.path().join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
    assert_eq!(m["config"]["solver"], "leapfrog");
    assert!((m["cfl_max_tau"].as_f64().unwrap() - 0.45508986056222733).abs() < 1e-15);
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn tolerance_failure_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let o = run_into(dir.path(), "--points 8 --steps 5 --initial gaussian:1.5 --compare leapfrog,series:2 --tol 1e-12");
    assert_eq!(code(&o), 1);
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert!(csv.starts_with("step,gap\n"));
    assert_eq!(csv.lines().count(), 7);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn invalid_configurations_exit_with_two() {
    for args in [
        "--tau 0.5",
        "--dim 2 --tau 0.33",
        "--points 7",
        "--solver magic",
        "--solver series",
        "--initial gaussian:-1",
        "--initial planewave:9",
        "--compare leapfrog",
        "--spacing 0",
        "--no-such-flag",
    ] {
        let o = run(&args.split_whitespace().collect::<Vec<_>>());
        assert_eq!(code(&o), 2, "{args}");
    }
}

#[test]
fn unknown_config_keys_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, r#"{"dim": 1, "colour": "red"}"#).unwrap();
    assert_eq!(code(&run(&["--config", path.to_str().unwrap()])), 2);
    fs::write(&path, "{not json").unwrap();
    assert_eq!(code(&run(&["--config", path.to_str().unwrap()])), 2);
}

#[test]
fn io_failures_exit_with_three() {
    assert_eq!(code(&run(&["--config", "/nonexistent/cfg.json"])), 3);
    assert_eq!(code(&run(&["--initial", "file:/nonexistent/field.csv"])), 3);
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("plain-file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    assert_eq!(code(&run(&["--steps", "1", "--out", out.to_str().unwrap()])), 3);
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cfg.json");
    let out = dir.path().join("run");
    fs::write(
        &path,
        format!(
            r#"{{"dim": 1, "points": 8, "tau": 0.1, "steps": 4, "solver": "leapfrog", "manifest": true, "out": "{}"}}"#,
            out.display()
        ),
    )
    .unwrap();
    let o = run(&["--config", path.to_str().unwrap(), "--steps", "1", "--solver", "series:12"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_files(&out), ["psi_0000.csv", "psi_0001.csv"]);
    let m: Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["steps"], 1);
    assert_eq!(m["config"]["tau"], 0.1);
    assert_eq!(m["config"]["solver"], "series:12");
}

#[test]
fn file_datum_round_trips() {
    let dir = TempDir::new().unwrap();
    let datum = golden("gaussian_2d_steps0.csv");
    let args = format!("--dim 2 --points 4 --steps 0 --initial file:{}", datum.display());
    assert_eq!(code(&run_into(dir.path(), &args)), 0);
    assert_eq!(fs::read(dir.path().join("psi_0000.csv")).unwrap(), fs::read(&datum).unwrap());
}

#[test]
fn subordination_writes_mode_diagnostics() {
    let dir = TempDir::new().unwrap();
    let o = run_into(dir.path(), "--points 8 --steps 2 --solver subordination:40,128,1024");
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("subordination_modes.csv")).unwrap();
    assert!(csv.starts_with("k1,lambda,status,s_max,band_nodes\n"));
    assert_eq!(csv.lines().count(), 9);
    assert!(String::from_utf8_lossy(&o.stdout).contains("non-convergent modes: 0"));
}

#[test]
fn leapfrog_and_spectral_agree_on_the_acceptance_run() {
    let dir = TempDir::new().unwrap();
    let o = run_into(
        dir.path(),
        "--dim 1 --points 16 --spacing 1 --tau 0.2 --steps 50 --initial gaussian:1.5 --compare leapfrog,spectral --tol 1e-9",
    );
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{stdout}");
}
