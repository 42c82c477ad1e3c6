use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn ahm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let out = ahm(args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_hm_is_equality() {
    let (code, rep) = json_report(&["verify", s(&spec("g_hm.toml"))]);
    assert_eq!(code, 0);
    let result = &rep["runs"][0]["result"];
    assert_eq!(result["equality_verdict"], "equality");
    assert!(result["difference"].as_f64().unwrap().abs() <= 1e-6);
    assert!(result["rigidity_residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(rep["config"]["tol"], 1e-4);
    assert_eq!(rep["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_hm_type_is_strict() {
    let (code, rep) = json_report(&["verify", s(&spec("hm_type.toml"))]);
    assert_eq!(code, 0);
    let result = &rep["runs"][0]["result"];
    assert_eq!(result["equality_verdict"], "strict");
    assert!(result["difference"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_table_minimum_at_one() {
    let out = ahm(&["sweep", "--n", "3..8", "--s", "0:4:0.001", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,min,argmin,max_rel_gap,spurious_zeros"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row[1], 0.0);
        assert_eq!(row[2], 1.0);
        assert_eq!(row[4], 0.0);
    }
}

#[test]
fn fuzz_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = spec("g_hm.toml");
    for out in [&a, &b] {
        let o = ahm(&[
            "fuzz",
            s(&base),
            "--seed",
            "3",
            "--samples",
            "2",
            "--grid",
            "16,8,8",
            "--out",
            s(out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "temporary files left behind: {names:?}");
}

#[test]
fn config_file_resolves_relative_spec() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(spec("g_hm.toml"), dir.path().join("m.toml")).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "spec = \"m.toml\"\nformat = \"csv\"\nout = \"energy.csv\"\n").unwrap();
    let o = ahm(&["energy", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(text.starts_with("spec,e_g,e_hm,difference,r_breve_0,boundary_volume\n"));
}

#[test]
fn config_errors_exit_two() {
    let g = spec("g_hm.toml");
    for args in [
        vec!["verify", "missing.toml"],
        vec!["verify", s(&g), "--grid", "4,8,8"],
        vec!["verify", s(&g), "--grid", "8,8"],
        vec!["fuzz", s(&g), "--amplitude", "-1"],
        vec!["energy", s(&g), "--grid", "8,8,8"],
        vec!["sweep", "--s", "0:4"],
        vec!["verify"],
    ] {
        let o = ahm(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_check_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("detuned.toml");
    std::fs::write(&p, "n = 3\na = 0.0\nr0 = 1.0\nlambda = [1.0]\nxi_period = 2.0\n").unwrap();
    let o = ahm(&["gauge", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizon_residual"));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["passed"], false);
    assert!(rep["first_failure"].as_str().unwrap().contains("horizon_residual"));
}

#[test]
fn curvature_csv_schema() {
    let o = ahm(&[
        "curvature",
        s(&spec("hm_type_n4.toml")),
        "--grid",
        "8,8,8",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("spec,r,xi,phi3,phi4,value,reference,residual")
    );
    assert!(text.lines().count() > 8);
}

#[test]
fn validate_and_gauge_pass_on_shipped_specs() {
    for name in ["g_hm.toml", "hm_type.toml", "hm_type_n4.toml"] {
        for sub in ["validate", "gauge", "energy"] {
            let (code, rep) = json_report(&[sub, s(&spec(name))]);
            assert_eq!(code, 0, "{sub} {name}: {}", rep["first_failure"]);
        }
    }
}
