use std::process::{Command, Output};

use serde_json::Value;

fn spinsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinsq"))
        .args(args)
        .env_remove("SPINSQ_GUARD_DIM")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = spinsq(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn coherent_state_saturates_every_inequality() {
    let v = json(&["analyze", "--state", "coherent:j=1,N=3,dir=0,0.6,0.8"]);
    assert_eq!(v["schema"], 1);
    let crit = v["criteria"]["criteria"].as_object().unwrap();
    for name in ["symmsatin", "isoin", "betosp_x", "betosp_y", "betosp_z", "twovar_x", "twovar_y", "twovar_z"] {
        let r = &crit[name];
        assert!(r["margin"].as_f64().unwrap().abs() < 1e-9, "{name}: {r}");
        assert_eq!(r["violated"], false);
    }
    assert_eq!(v["ppt"]["any_npt"], false);
}

#[test]
fn singlet_is_flagged() {
    let v = json(&["analyze", "--state", "singlet:j=1/2,N=4"]);
    assert_eq!(v["criteria"]["criteria"]["isoin"]["violated"], true);
    assert_eq!(v["criteria"]["entangled"], true);
}

#[test]
fn noise_scan_reports_the_singlet_threshold() {
    let v = json(&["scan-noise", "--state", "singlet:j=1,N=2", "--criterion", "isoin"]);
    let t = v["result"]["threshold"].as_f64().unwrap();
    assert!((t - 0.5).abs() < 1e-5, "{v}");
}

#[test]
fn temperature_scan_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = spinsq(&["--json", path.to_str().unwrap(), "scan-temperature"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ts = v["T_s"].as_f64().unwrap();
    let tp = v["T_ppt"].as_f64().unwrap();
    assert!(ts > tp && (ts - 3.66).abs() < 0.02 && (tp - 3.57).abs() < 0.02, "{v}");
}

#[test]
fn polytope_csv_lists_six_vertices() {
    let out = spinsq(&["polytope", "--j", "1", "--N", "2", "--J", "0,0,1", "--resolution", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,name,x,y,z"));
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex,")).count(), 6);
    assert!(text.lines().any(|l| l.starts_with("mesh,")));
}

#[test]
fn measurement_is_seeded() {
    let args = ["--seed", "7", "measure", "--state", "dicke:j=1/2,N=4", "--axis", "x", "--shots", "50"];
    let a = spinsq(&args);
    let b = spinsq(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("shot,"));
}

#[test]
fn table1_rows_match() {
    let v = json(&["table1"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!(r["max_abs_deviation"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(spinsq(&["analyze", "--state", "bogus:j=1"]).status.code(), Some(2));
    assert_eq!(spinsq(&["frobnicate"]).status.code(), Some(2));
    let big = spinsq(&["--guard-dim", "100", "analyze", "--state", "mixed:j=1,N=5"]);
    assert_eq!(big.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&big.stderr).contains("243"));
}
