use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn lab(args: &[&str], workers_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lab"));
    cmd.args(args).env_remove("LAB_WORKERS");
    if let Some(w) = workers_env {
        cmd.env("LAB_WORKERS", w);
    }
    cmd.output().expect("lab runs")
}

fn run_config(name: &str, sub: &str, out: &Path, extra: &[&str], env: Option<&str>) -> Output {
    let cfg = configs().join(name);
    let mut args = vec![sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    lab(&args, env)
}

#[test]
fn distance_weight_shift_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("distance.json", "distance", dir.path(), &[], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("distance.csv")).unwrap();
    let v: f64 = csv
        .lines()
        .find(|l| l.starts_with("0,1,D_N,9,"))
        .and_then(|l| l.rsplit(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((v - 0.4).abs() < 1e-12);
    let env: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("distance.json")).unwrap()).unwrap();
    assert_eq!(env["status"], "ok");
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let cases = [
        ("divergence.json", "divergence"),
        ("probe.json", "probe"),
        ("probe_curvature.json", "probe"),
        ("posterior-sim.json", "posterior-sim"),
        ("witness.json", "witness"),
    ];
    for (name, sub) in cases {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let c = tempfile::tempdir().unwrap();
        assert!(run_config(name, sub, a.path(), &["--workers", "1"], None).status.success());
        assert!(run_config(name, sub, b.path(), &[], Some("4")).status.success());
        // --workers wins over the environment.
        assert!(run_config(name, sub, c.path(), &["--workers", "2"], Some("not-a-number")).status.success());
        for file in [format!("{sub}.csv"), format!("{sub}.json")] {
            let x = std::fs::read(a.path().join(&file)).unwrap();
            assert_eq!(x, std::fs::read(b.path().join(&file)).unwrap(), "{name} {file}");
            assert_eq!(x, std::fs::read(c.path().join(&file)).unwrap(), "{name} {file}");
        }
    }
}

#[test]
fn seed_flag_overrides_config() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run_config("divergence.json", "divergence", a.path(), &["--seed", "99"], None).status.success());
    assert!(run_config("divergence.json", "divergence", b.path(), &[], None).status.success());
    let ja = std::fs::read_to_string(a.path().join("divergence.json")).unwrap();
    assert!(ja.contains("\"seed\": 99"));
    assert_ne!(
        std::fs::read(a.path().join("divergence.csv")).unwrap(),
        std::fs::read(b.path().join("divergence.csv")).unwrap()
    );
}

#[test]
fn schema_error_exits_nonzero_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"subcommand": "distance", "measures": []}"#).unwrap();
    let o = lab(&["distance", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["kind"], "SchemaError");
    assert!(err["message"].as_str().unwrap().contains("seed"));
    assert!(!dir.path().join("distance.csv").exists());
}

#[test]
fn runtime_error_removes_stale_outputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("witness.csv"), "stale").unwrap();
    let cfg = dir.path().join("w.json");
    // A single atom has no witness (k ≥ 2 required).
    std::fs::write(
        &cfg,
        r#"{"subcommand": "witness", "seed": 1, "measures": [{"atoms": [[0.4]], "weights": [1.0]}]}"#,
    )
    .unwrap();
    let o = lab(&["witness", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("witness.csv").exists());
}

#[test]
fn subcommand_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("distance.json", "witness", dir.path(), &[], None);
    assert_eq!(o.status.code(), Some(2));
}
