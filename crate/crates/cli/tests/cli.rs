use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threeagent"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_value(text: &str, var: &str, t: usize) -> f64 {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[0] == var && f[1] == t.to_string())
        .map(|f| f[2].parse().unwrap())
        .unwrap_or_else(|| panic!("{var} at t={t} missing"))
}

#[test]
fn steady_prints_derived_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["steady"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for key in ["psi", "F ", "tau_K", "tau_weighted_sum", "Y "] {
        assert!(out.contains(key), "missing {key}");
    }
}

#[test]
fn technology_irf_written_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["irf", "--shock", "tech", "--size", "-1", "--phi-pi", "0.8", "--gamma-t", "1", "--out", "res"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("liquidity premium gap"));
    let stem = "irf_tech_-1_phi0.8_gammaT1_three_nominal";
    let csv = fs::read_to_string(dir.path().join("res").join(format!("{stem}.csv"))).unwrap();
    assert_eq!(csv.lines().next(), Some("variable,t,value,unit"));
    assert!((csv_value(&csv, "A", 0) + 1.0).abs() < 1e-9);
    assert!((csv_value(&csv, "A", 2) + 0.5625).abs() < 1e-9);
    assert!(dir.path().join("res").join(format!("{stem}.manifest.json")).exists());
}

#[test]
fn sign_flag_flips_monetary_shock() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["irf", "--shock", "monetary", "--sign", "+1", "--out", "."]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("irf_monetary_1_phi0.8_gammaT1_three_nominal.csv")).unwrap();
    assert!(csv_value(&csv, "M", 0) > 0.0);
    assert!(csv_value(&csv, "R_b", 0) > 0.0);

    let bad = run(dir.path(), &["irf", "--shock", "monetary", "--sign", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn indeterminate_regime_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["irf", "--shock", "fiscal", "--fiscal-mode", "real", "--phi-pi", "0.8", "--gamma-t", "1"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("indeterminate"));
}

#[test]
fn corrupted_transition_entry_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "lambda_KS = 0.28\n").unwrap();
    let o = run(dir.path(), &["verify", "--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 0 sums to 1.1"), "{}", stderr(&o));
}

#[test]
fn unknown_parameter_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "betta = 0.99\n").unwrap();
    let o = run(dir.path(), &["steady", "--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_battery_passes_at_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_skips_impulse_checks_when_indeterminate() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("real.toml"),
        "fiscal_mode = \"real\"\nphi_pi = 0.8\ngamma_T = 1.0\n",
    )
    .unwrap();
    let o = run(dir.path(), &["verify", "--config", "real.toml"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("indeterminate"));
    assert!(out.contains("skipped"));
    assert!(!out.contains("liquidity premium identity"));
}

#[test]
fn manifest_replay_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["scan", "--grid", "phi_pi:0.5:1.5:3", "--grid", "gamma_T:0:1:3", "--out", "s"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let stem = "scan_phi_pi_gamma_T_three_nominal";
    let manifest = format!("s/{stem}.manifest.json");

    let ok = run(dir.path(), &["verify", "--manifest", &manifest]);
    assert!(ok.status.success(), "{}", stdout(&ok));

    let csv_path = dir.path().join("s").join(format!("{stem}.csv"));
    let csv = fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 10);
    fs::write(&csv_path, csv.replacen("determinate", "explosive", 1)).unwrap();
    let bad = run(dir.path(), &["verify", "--manifest", &manifest]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(stdout(&bad).contains("does not match"));

    let mpath = dir.path().join(&manifest);
    let text = fs::read_to_string(&mpath).unwrap();
    fs::write(&mpath, text.replace("\"beta\": 0.99", "\"beta\": 0.98")).unwrap();
    let forged = run(dir.path(), &["verify", "--manifest", &manifest]);
    assert_eq!(forged.status.code(), Some(4));
    assert!(stdout(&forged).contains("input hash"));
}

#[test]
fn scan_needs_two_axes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["scan", "--grid", "phi_pi:0.5:1.5:3"]);
    assert_eq!(o.status.code(), Some(2));
    let pinned = run(
        dir.path(),
        &["scan", "--variant", "two", "--grid", "pop_H:0.1:0.3:2", "--grid", "phi_pi:0.5:1.5:2"],
    );
    assert_eq!(pinned.status.code(), Some(2));
}

#[test]
fn multipliers_cover_both_economies() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["multipliers", "--out", "m"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("m/multipliers_three-two_nominal_h15.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for economy in ["three", "two"] {
        assert_eq!(v[economy]["impact"].as_array().unwrap().len(), 4);
        assert_eq!(v[economy]["cumulative"].as_array().unwrap().len(), 4);
    }
    let impact = v["three"]["impact"][0].as_f64().unwrap();
    assert!((impact - 1.31).abs() < 0.01, "{impact}");

    let single = run(dir.path(), &["multipliers", "--variant", "two", "--out", "m"]);
    assert!(single.status.success());
    assert_eq!(stdout(&single).lines().count(), 5);
}
