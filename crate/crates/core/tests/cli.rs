use std::process::{Command, Output};

use serde_json::Value;

fn shells(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shells")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn shell_radius_reports_all_determinations() {
    let v = json(&shells(&["shell-radius", "--alpha", "4", "--beta", "2", "--dim", "2"]));
    let third = 1.0 / 3f64.sqrt();
    assert!((v["rootfind"].as_f64().unwrap() - third).abs() < 1e-7);
    assert!((v["closed_form"].as_f64().unwrap() - third).abs() < 1e-7);
    let r = &v["r_star"];
    assert!((r["root"].as_f64().unwrap() - third).abs() < 1e-7);
    assert!((r["alternate_closed_form"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-7);
    assert_eq!(r["alternate_form_flagged"], Value::Bool(true));
    assert_eq!(r["corrected_flagged"], Value::Bool(false));
}

#[test]
fn convexity_verdict_for_alpha_three() {
    let v = json(&shells(&["convexity", "--alpha", "3", "--dim", "2", "--trials", "200", "--seed", "7"]));
    assert_eq!(v["verdict"], "strictly positive");
    assert_eq!(v["trials"], 200);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["convexity", "--alpha", "1.5", "--dim", "3", "--seed", "11"][..],
        &["flow", "--alpha", "3.5", "--particles", "40", "--seed", "5", "--t-end", "2"][..],
        &["lyapunov", "--particles", "16", "--deltas", "0.02", "--t-end", "2"][..],
        &["radial-profile", "--alpha", "3", "--radii", "0.5,1.5", "--points", "20"][..],
    ] {
        let a = shells(args);
        let b = shells(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn ring_file_round_trips_through_energy_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let ring = dir.path().join("ring.json");
    let v = json(&shells(&["ring", "--alpha", "4", "--k", "6", "--out", ring.to_str().unwrap()]));
    assert!((v["radius"].as_f64().unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-10);

    let e = json(&shells(&["energy", ring.to_str().unwrap(), "--alpha", "4"]));
    assert!((e["energy"].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-12);

    let d = json(&shells(&["distance", ring.to_str().unwrap(), ring.to_str().unwrap(), "--p", "inf"]));
    assert_eq!(d["distance"].as_f64().unwrap(), 0.0);
}

#[test]
fn flow_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let snaps = dir.path().join("snaps");
    let v = json(&shells(&[
        "flow", "--alpha", "3", "--particles", "20", "--t-end", "1", "--stride", "5",
        "--out", csv.to_str().unwrap(), "--snapshots", snaps.to_str().unwrap(),
    ]));
    assert!(v["max_energy_increase"].as_f64().unwrap() <= 1e-10);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("time,energy,force_residual"));
    assert_eq!(text.lines().count(), v["recorded_states"].as_u64().unwrap() as usize + 1);
    assert!(snaps.join("state_00000.json").exists());
}

#[test]
fn radial_profile_csv_header() {
    let out = shells(&["radial-profile", "--alpha", "3", "--dim", "3", "--points", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("r,f,f1,f2,f3"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn simplex_moments_match() {
    let v = json(&shells(&["simplex", "--dim", "4"]));
    for p in v["polytopes"].as_array().unwrap() {
        assert!(p["moment_error"].as_f64().unwrap() < 1e-12);
        assert!(p["energy_error"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(shells(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(shells(&["ring", "--k", "2"]).status.code(), Some(6));
    assert_eq!(shells(&["energy", "/nonexistent/measure.json"]).status.code(), Some(11));
    assert_eq!(shells(&["verify", "--only", "12"]).status.code(), Some(6));
    let v = shells(&["verify", "--only", "1,2"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8(v.stdout).unwrap().contains("2 of 2 checks passed"));
}
