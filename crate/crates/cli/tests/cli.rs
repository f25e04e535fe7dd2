use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pov")).args(args).output().expect("run pov")
}

fn run_ok(args: &[&str]) -> String {
    let out = pov(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn config_arg(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn verify_extreme_pair() {
    let report = json(&["verify", "--config", &config_arg("extreme_pair.json")]);
    assert_eq!(report["verdict"], "equilibrium");
    assert_eq!(report["witness"], Value::Null);
    assert_eq!(
        report["lottery"],
        serde_json::json!([{"value": "-4", "probability": "1/2"}, {"value": "4", "probability": "1/2"}])
    );
    assert_eq!(report["expected_utilities"], serde_json::json!(["-32", "-25", "-25", "-32"]));
}

#[test]
fn verify_defaults_to_median_profile() {
    let report = json(&["verify", "--config", &config_arg("odd_three.json")]);
    assert_eq!(report["verdict"], "equilibrium");
    assert_eq!(report["lottery"], serde_json::json!([{"value": "0", "probability": "1"}]));
    assert_eq!(report["profile"], serde_json::json!(["vote", {"propose": "0"}, "vote"]));
    assert_eq!(report["epsilon"], "1/200");
    assert_eq!(report["grid_step"], "1/10");
}

#[test]
fn refuted_profile_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lone.json");
    std::fs::write(&cfg, r#"{"bound": 5, "peaks": [-1, 0, 1], "profile": [{"propose": -1}, "vote", "vote"]}"#).unwrap();
    let report = json(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(report["verdict"], "refuted");
    let w = &report["witness"];
    let before: frac::Frac = w["utility_before"].as_str().unwrap().parse().unwrap();
    let after: frac::Frac = w["utility_after"].as_str().unwrap().parse().unwrap();
    assert!(after.0 > before.0);
}

/// Minimal fraction parsing so the test does not lean on the library under test.
mod frac {
    pub struct Frac(pub f64);

    impl std::str::FromStr for Frac {
        type Err = std::num::ParseFloatError;
        fn from_str(s: &str) -> Result<Self, Self::Err> {
            match s.split_once('/') {
                Some((n, d)) => Ok(Frac(n.parse::<f64>()? / d.parse::<f64>()?)),
                None => Ok(Frac(s.parse()?)),
            }
        }
    }
}

#[test]
fn invalid_input_exits_two_and_names_field() {
    let out = pov(&["verify", "--config", &config_arg("bad_peaks.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("peaks"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"bound": 5, "peaks": [-1, 0, 1], "epsilon": 0}"#).unwrap();
    let out = pov(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));

    std::fs::write(&cfg, r#"{"bound": 5, "peaks": [-1, 0, 1], "profile": ["vote", "vote"]}"#).unwrap();
    let out = pov(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("profile"));

    let out = pov(&["verify", "--config", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn too_large_exits_three() {
    let out = pov(&["enumerate", "--config", &config_arg("too_large.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_rows() {
    let single = json(&["enumerate", "--config", &config_arg("odd_three.json"), "--max-proposers", "1"]);
    assert_eq!(single["count"], 1);
    assert_eq!(single["rows"][0]["profile"], serde_json::json!(["vote", {"propose": "0"}, "vote"]));

    let csv = run_ok(&["enumerate", "--config", &config_arg("counterexample.json"), "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "roles,proposals,lottery,outcome_class");
    assert!(lines.len() >= 3);
    assert!(lines.contains(&"V P P V,1=-3;2=3,-3:1/2;3:1/2,1"), "{csv}");
    assert!(lines.iter().any(|l| l.starts_with("P V V P,0=-4;3=4,")), "{csv}");

    let tour = json(&["enumerate", "--config", &config_arg("tournament_three.json")]);
    assert_eq!(tour["count"], 1);
}

#[test]
fn tournament_uniqueness() {
    let report = json(&["tournament", "--config", &config_arg("odd_three.json")]);
    assert_eq!(report["unique"], true);
    assert_eq!(report["artificial_peak"], "0");
    assert_eq!(report["expected"], serde_json::json!(["vote", {"propose": "0"}, "vote"]));
}

#[test]
fn election_scan_contains_median_self_nomination() {
    let report = json(&["election", "--config", &config_arg("odd_three.json")]);
    let rows = report["rows"].as_array().unwrap();
    let median = serde_json::json!(["vote", {"nominate": 1}, "vote"]);
    assert!(rows.iter().any(|r| r["profile"] == median));
}

#[test]
fn reports_reload_as_configs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, extra) in [("extreme_pair.json", None), ("odd_three.json", Some("tournament"))] {
        let first = dir.path().join(format!("{name}.report.json"));
        let mut args = vec!["verify", "--config"];
        let cfg = config_arg(name);
        args.push(&cfg);
        args.extend(["--out", first.to_str().unwrap()]);
        run_ok(&args);
        if extra.is_some() {
            // Switch variant on the reloaded report to exercise the tournament path.
            let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
            v["variant"] = "tournament".into();
            std::fs::write(&first, v.to_string()).unwrap();
        }
        let second = run_ok(&["verify", "--config", first.to_str().unwrap()]);
        let third_path = dir.path().join("again.json");
        std::fs::write(&third_path, &second).unwrap();
        let third = run_ok(&["verify", "--config", third_path.to_str().unwrap()]);
        assert_eq!(second, third);
        let v: Value = serde_json::from_str(&second).unwrap();
        assert_eq!(v["verdict"], "equilibrium");
    }
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let cfg = config_arg("extreme_pair.json");
    let a = run_ok(&["sample", "--config", &cfg, "--seed", "42", "--samples", "2000"]);
    let b = run_ok(&["sample", "--config", &cfg, "--seed", "42", "--samples", "2000"]);
    assert_eq!(a, b);
    let c = run_ok(&["sample", "--config", &cfg, "--seed", "43", "--samples", "2000"]);
    assert_ne!(a, c);
    let e1 = run_ok(&["enumerate", "--config", &config_arg("counterexample.json"), "--format", "csv"]);
    let e2 = run_ok(&["enumerate", "--config", &config_arg("counterexample.json"), "--format", "csv"]);
    assert_eq!(e1, e2);
}

#[test]
fn sample_counts_cover_support() {
    let report = json(&["sample", "--config", &config_arg("extreme_pair.json"), "--samples", "4000"]);
    let freqs = report["frequencies"].as_array().unwrap();
    let total: u64 = freqs.iter().map(|f| f["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 4000);
    for f in freqs {
        let c = f["count"].as_u64().unwrap() as f64 / 4000.0;
        assert!((c - 0.5).abs() < 0.05);
    }
}
