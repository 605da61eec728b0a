use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn wasserlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wasserlab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn wp_on_the_ray() {
    let dir = TempDir::new().unwrap();
    let space = write(dir.path(), "s.json", &json!({"kind": "ray"}));
    let mu = write(dir.path(), "mu.json", &json!({"atoms": [{"point": 1.0, "weight": 1.0}]}));
    let nu = write(dir.path(), "nu.json", &json!({"atoms": [{"point": 0.0, "weight": 0.75}, {"point": 2.0, "weight": 0.25}]}));
    let plan = dir.path().join("plan.json");
    let out = wasserlab(&["wp", "--space", &space, "--mu", &mu, "--nu", &nu, "--p", "2", "--plan", plan.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert!((v["wp"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let plan: Value = serde_json::from_str(&fs::read_to_string(&plan).unwrap()).unwrap();
    let mass: f64 = plan["entries"].as_array().unwrap().iter().map(|e| e["mass"].as_f64().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn plan_then_interpolate_on_a_suspension() {
    let dir = TempDir::new().unwrap();
    let space = json!({"kind": "suspension", "base": {"kind": "finite", "dist": [0, 0.4, 0.4, 0]}, "strict": true});
    let mu = write(dir.path(), "mu.json", &json!({"space": space, "atoms": [{"point": "zero", "weight": 1}]}));
    let nu = write(
        dir.path(),
        "nu.json",
        &json!({"space": space, "atoms": [
            {"point": {"base": 0, "angle": std::f64::consts::FRAC_PI_2}, "weight": 0.5},
            {"point": {"base": 1, "angle": std::f64::consts::FRAC_PI_2}, "weight": 0.5}
        ]}),
    );
    let plan = dir.path().join("plan.json");
    let out = wasserlab(&["wp", "--mu", &mu, "--nu", &nu, "--plan", plan.to_str().unwrap()]);
    assert!((stdout_json(&out)["wp"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let m = stdout_json(&wasserlab(&["interpolate", "--plan", plan.to_str().unwrap(), "--t", "0.5"]));
    let atoms = m["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 2);
    for a in atoms {
        assert!((a["point"]["angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert_eq!(a["weight"], json!(0.5));
    }
}

#[test]
fn exotic_moves_the_witness() {
    let dir = TempDir::new().unwrap();
    let psi = write(dir.path(), "psi.json", &json!([[0.0, -1.0], [1.0, 0.0]]));
    let space = json!({"kind": "qproduct", "q": 2, "left": {"kind": "euclidean", "dim": 2}, "right": {"kind": "finite", "dist": [0, 1, 1, 0]}});
    let mu = write(
        dir.path(),
        "mu.json",
        &json!({"space": space, "atoms": [{"point": [[0, 0], 0], "weight": 1.0 / 3.0}, {"point": [[1, 0], 0], "weight": 2.0 / 3.0}]}),
    );
    let nu = write(dir.path(), "nu.json", &json!({"space": space, "atoms": [{"point": [[0.5, 2], 1], "weight": 1}]}));
    let image = stdout_json(&wasserlab(&["exotic", "--psi", &psi, "--mu", &mu]));
    let moved = image["atoms"].as_array().unwrap().iter().find(|a| (a["weight"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12).unwrap();
    let h = &moved["point"][0];
    assert!((h[0].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((h[1].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-12);
    let report = stdout_json(&wasserlab(&["exotic", "--psi", &psi, "--mu", &mu, "--nu", &nu]));
    assert!(report["distortion"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", &json!({"space": {"kind": "ray"}, "atoms": [{"point": 0, "weight": 0.4}]}));
    let good = write(dir.path(), "good.json", &json!({"space": {"kind": "ray"}, "atoms": [{"point": 0, "weight": 1}]}));
    assert_eq!(wasserlab(&["wp", "--mu", &bad, "--nu", &good]).status.code(), Some(2));
    assert_eq!(wasserlab(&["wp", "--mu", &good, "--nu", "/nonexistent/x.json"]).status.code(), Some(2));
    let skew = write(dir.path(), "skew.json", &json!([[1.0, 1.0], [0.0, 1.0]]));
    assert_eq!(wasserlab(&["exotic", "--psi", &skew, "--mu", &good]).status.code(), Some(2));
    assert_eq!(wasserlab(&["verify", "nonexistent"]).status.code(), Some(2));
    assert_eq!(wasserlab(&["verify", "conditions", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(wasserlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(wasserlab(&["verify", "conditions", "--out", "/nonexistent/dir/r.json"]).status.code(), Some(2));
}

#[test]
fn assertion_failures_exit_with_one() {
    // Under W_1 a Dirac equator measure has many midpoints to a pole mixture.
    let out = wasserlab(&["verify", "suspension-midpoints", "--p", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], json!(false));
    assert_eq!(wasserlab(&["verify", "cylinder-branching", "--p", "3", "--q", "1.5"]).status.code(), Some(0));
}

#[test]
fn reports_are_reproducible() {
    let a = wasserlab(&["verify", "exotic", "--seed", "7"]);
    let b = wasserlab(&["verify", "exotic", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = wasserlab(&["verify", "exotic", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], json!(7));
    assert_eq!(report["pass"], json!(true));
    assert!(report.get("wall_time_ms").is_none());
}

#[test]
fn ray_formulas_pass_and_csv_lists_every_assertion() {
    let json_out = wasserlab(&["verify", "ray-formulas", "--seed", "7"]);
    let report = stdout_json(&json_out);
    let n = report["assertions"].as_array().unwrap().len();
    let csv_out = wasserlab(&["verify", "ray-formulas", "--seed", "7", "--format", "csv"]);
    assert!(csv_out.status.success());
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), n);
    assert!(rows.iter().all(|r| &r[0] == "ray-formulas" && &r[7] == "true"));
}

#[test]
fn report_runs_selected_suites() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("batch.json");
    let status = wasserlab(&["report", "--suite", "conditions", "--suite", "frechet", "--timed", "--out", out.to_str().unwrap()]).status;
    assert!(status.success());
    let batch: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let reports = batch["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["wall_time_ms"].is_number()));
    let list = wasserlab(&["report", "--list"]);
    assert_eq!(String::from_utf8(list.stdout).unwrap().lines().count(), 11);
}
