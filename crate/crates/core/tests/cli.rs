use std::process::Command;

fn trac() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trac"))
}

#[test]
fn run_then_aggregate_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = trac()
        .args(["run", "--experiment", "trac", "--seeds", "0,1", "--total-env-steps", "1600", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let exp = dir.path().join("trac");
    for f in ["config.toml", "aggregate.csv", "aggregate.json", "trac/seed_0/summary.json", "trac/seed_1/scaling.csv"] {
        assert!(exp.join(f).is_file(), "{f}");
    }

    let out = trac().arg("aggregate").arg(&exp).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("cumulative_mean_episode_reward"));

    let out = trac().args(["plot-data", "--kind", "scaling_trace"]).arg(&exp).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(exp.join("plot_scaling_trace.csv").is_file());
}

#[test]
fn output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = trac()
        .args(["run", "--experiment", "oco_bench", "--seeds", "3"])
        .env("TRAC_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("oco_bench/oco_bench/seed_3/regret_trac.csv").is_file());
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "experiment = \"simplified_equivalence\"\nseeds = [4]\n[simplified]\nsteps = 50\n").unwrap();
    let out = trac().arg("run").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("simplified_equivalence/simplified_equivalence/seed_4/residuals.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = trac().arg("aggregate").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = trac().args(["run", "--experiment", "trac", "--total-env-steps", "5", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn default_config_prints_toml() {
    let out = trac().args(["default-config", "l2_sweep"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("experiment = \"l2_sweep\""));
    assert!(text.contains("lambda_grid"));
}
