//! End-to-end runs of the `gausswig` binary on small configurations.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gausswig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gausswig"))
        .args(args)
        .env_remove("GAUSSWIG_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_passes_and_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1}"#);
    let out = dir.path().join("r.json");
    let o = gausswig(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let entries = r["entries"].as_array().unwrap();
    assert!(entries.len() > 10);
    for e in entries {
        for key in ["check_id", "paper_anchor", "params", "residual", "tolerance", "pass"] {
            assert!(e.get(key).is_some(), "missing {key} in {e}");
        }
        assert_eq!(e["pass"], true);
    }
    assert_eq!(r["summary"]["total"], entries.len());
    assert_eq!(r["summary"]["passed"], entries.len());
}

#[test]
fn failing_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 0}"#);
    let out = dir.path().join("r.json");
    let o = gausswig(&["verify", "--config", &cfg, "--tol", "1e-300", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out);
    assert!(r["entries"].as_array().unwrap().iter().any(|e| e["pass"] == false));
}

#[test]
fn truncation_zero_runs_scalar_checks_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 0}"#);
    let out = dir.path().join("r.json");
    let o = gausswig(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    for e in r["entries"].as_array().unwrap() {
        let id = e["check_id"].as_str().unwrap();
        assert!(id.starts_with("gaussian.") || id.starts_with("measure_ft."), "{id}");
    }
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"truncation": 5}"#,
        r#"{"spectrum": [1.0, -0.5]}"#,
        r#"{"grid": {"points": 48, "radius_sigmas": 10.0}}"#,
        r#"{"unknown": 1}"#,
        r#"{"s_variant": "other"}"#,
        "not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(&dir, &format!("c{i}.json"), text);
        let o = gausswig(&["verify", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "config {text}");
    }
    let missing = dir.path().join("absent.json");
    assert_eq!(gausswig(&["verify", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(gausswig(&["verify", "--s-variant", "sideways"]).status.code(), Some(2));
    let cfg = write(&dir, "ok.json", r#"{"truncation": 0}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_gausswig"))
        .args(["verify", "--config", &cfg])
        .env("GAUSSWIG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn printed_variant_is_reported() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1, "spectrum": [0.5, 0.25]}"#);
    let out = dir.path().join("r.json");
    let o = gausswig(&["verify", "--config", &cfg, "--s-variant", "printed", "--out", out.to_str().unwrap()]);
    let r = report(&out);
    let s = r["entries"].as_array().unwrap().iter().find(|e| e["check_id"] == "unitarity.s").unwrap().clone();
    assert_eq!(s["params"]["variant"], "printed");
    assert_eq!(s["pass"], false, "printed S does not preserve norms: {s}");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn wigner_csv_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1}"#);
    let o = gausswig(&[
        "wigner", "--config", &cfg, "--state", "hermite:2", "--state2", "shifted-vacuum:0.5,-0.25", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["pass"], true);
    for name in ["wigner_lebesgue.csv", "wigner_gamma2.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x1,xi1,re,im"));
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 64 * 128);
        assert!(rows.iter().all(|r| r.len() == 4));
        for r in &rows {
            for &v in r {
                assert_eq!(v.to_string().parse::<f64>().unwrap(), v);
            }
        }
        assert!(rows.iter().any(|r| r[2] != 0.0 || r[3] != 0.0));
    }
}

#[test]
fn wigner_header_names_every_axis() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 2, "grid": {"points": 8, "radius_sigmas": 6.0}}"#);
    let o = gausswig(&["wigner", "--config", &cfg, "--state", "hermite:1,0", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.code() == Some(0) || o.status.code() == Some(1));
    let text = std::fs::read_to_string(dir.path().join("wigner_lebesgue.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2,xi1,xi2,re,im"));
}

#[test]
fn bad_state_spec_exits_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1}"#);
    for spec in ["hermite:1,2", "squeezed", "shifted-vacuum:1"] {
        let o = gausswig(&["wigner", "--config", &cfg, "--state", spec, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
    }
}

#[test]
fn same_seed_same_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1}"#);
    let run = |name: &str, seed: &str, threads: &str| {
        let out = dir.path().join(name);
        Command::new(env!("CARGO_BIN_EXE_gausswig"))
            .args(["verify", "--config", &cfg, "--seed", seed, "--out", out.to_str().unwrap()])
            .env("GAUSSWIG_THREADS", threads)
            .output()
            .unwrap();
        let mut r = report(&out);
        r["summary"]["wall_time"] = Value::Null;
        r
    };
    let a = run("a.json", "7", "1");
    let b = run("b.json", "7", "2");
    let c = run("c.json", "8", "1");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tower_reports_each_level() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"truncation": 1}"#);
    let out = dir.path().join("t.json");
    let o = gausswig(&["tower", "--config", &cfg, "--m-max", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    let ids: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["check_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"tower.isometry.m1"));
    assert!(ids.contains(&"tower.gamma2_vacuum.m1"));
}
