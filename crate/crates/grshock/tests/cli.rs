use std::process::Command;

fn grshock() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grshock"))
}

#[test]
fn riemann_in_scaled_units_reports_the_middle_state() {
    let out = grshock()
        .args([
            "riemann", "--rho-l", "1e8", "--v-l", "0.3", "--rho-r", "1e9", "--v-r", "0.6",
            "--sound-speed", "0.3333333333333333", "--light-speed", "1000",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let fan: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rho = fan["middle"]["rho"].as_f64().unwrap();
    let v = fan["middle"]["v"].as_f64().unwrap();
    assert!((rho / 2.002e8 - 1.0).abs() < 1e-3, "{rho}");
    assert!((v / 0.06390 - 1.0).abs() < 1e-3, "{v}");
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "model = \"tov\"\nsigmaa = 0.3\n").unwrap();
    let out = grshock().arg("simulate").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = grshock().args(["simulate", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_manifest_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = grshock()
        .args(["simulate", "--model", "frw1_tov", "--n", "128", "--duration", "0.2", "--snapshot-every", "5"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let snaps = manifest["snapshots"].as_array().unwrap();
    assert!(snaps.len() >= 2);
    let first = std::fs::read_to_string(dir.path().join("snapshot_00000.csv")).unwrap();
    assert_eq!(first.lines().count(), 129);
}

#[test]
fn emit_model_writes_the_initial_profile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frw1.csv");
    let out = grshock()
        .args(["emit-model", "--model", "frw1", "--n", "64", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows = grshock::output::read_snapshot(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.rho > 0.0 && r.v > 0.0));
}
