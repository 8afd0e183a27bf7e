use std::path::Path;
use std::process::{Command, Output};

use evt_cvar::distributions::Distribution;
use evt_cvar::rng::RngStream;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_evt-cvar"));
    c.env_remove("EVT_CVAR_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_losses(path: &Path, n: usize) {
    let v = Distribution::gpd(0.5, 1.0).unwrap().sample_iid(n, &mut RngStream::new(99, 0));
    let text: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    std::fs::write(path, format!("# losses\n{}\n", text.join("\n"))).unwrap();
}

#[test]
fn presets_lists_every_figure_setup() {
    let o = run(&["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig1a", "fig1d", "fig2c", "fig3b", "fig4a", "fig4b", "fig4c"] {
        assert!(text.contains(name), "{name} missing");
    }
    let o = run(&["presets", "--show", "fig4a"]);
    let cfg = evt_cvar::config::from_json(&stdout(&o)).unwrap();
    assert_eq!(cfg, evt_cvar::config::preset("fig4a").unwrap());
}

#[test]
fn single_arm_writes_schema_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = run(&[
        "single-arm", "--preset", "fig1c", "--runs", "4", "--stages", "300", "--seed", "7", "-q", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,rmse_sa,rmse_evt,fraction_closer"));
    // Stages 1..=100, then 110, 120, ..., 300.
    assert_eq!(lines.count(), 100 + 20);
}

#[test]
fn progress_goes_to_stderr() {
    let o = run(&["bandit", "--preset", "fig4a", "--runs", "2", "--stages", "60", "--schedule", "20:1,60:0.1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("t,pct_best_sa,pct_best_evt\n"));
    assert_eq!(stdout(&o).lines().count(), 61);
    assert!(stderr(&o).contains("run 2/2"));
}

#[test]
fn dumped_config_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let o = run(&[
        "bandit", "--preset", "fig4c", "--runs", "3", "--stages", "120", "--schedule", "40:1,120:0.2", "--seed",
        "5", "--workers", "2", "-q", "--out", a.to_str().unwrap(), "--dump-config", cfg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["bandit", "--config", cfg.to_str().unwrap(), "--workers", "1", "-q", "--out", b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn worker_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let o = bin()
        .args(["single-arm", "--preset", "fig2a", "--runs", "2", "--stages", "50", "-q", "--dump-config"])
        .arg(&cfg)
        .env("EVT_CVAR_WORKERS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(evt_cvar::config::load(&cfg).unwrap().workers, Some(3));
}

#[test]
fn estimate_prints_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("losses.txt");
    write_losses(&input, 3000);
    let o = run(&["estimate", "--input", input.to_str().unwrap(), "--alpha", "0.999", "--ci", "both", "--boot-M", "200"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("SA "), "{text}");
    assert!(text.contains("EVT"), "{text}");
    assert!(text.contains("Bootstrap interval") && text.contains("Delta interval"), "{text}");

    let o = run(&["estimate", "--input", input.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3000);
    assert_eq!(v["sa"]["method"], "SA");
}

#[test]
fn diagnose_threshold_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("losses.txt");
    write_losses(&input, 2000);
    let o = run(&["diagnose-threshold", "--input", input.to_str().unwrap(), "--candidates", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("quantile_level,u,n_excesses,xi_hat,sigma_hat,ad_stat,p_value,discarded_flag,chosen_flag")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",1")).count(), 1);
}

#[test]
fn errors_have_distinct_codes_and_messages() {
    let dir = tempfile::tempdir().unwrap();

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("frobnicate"));

    let bad_cfg = dir.path().join("bad.json");
    std::fs::write(&bad_cfg, "{\"version\": 1, \"kind\": \"bandit\", \"runs\": }").unwrap();
    let o = run(&["bandit", "--config", bad_cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json"), "{}", stderr(&o));

    let o = run(&["estimate", "--input", dir.path().join("nope.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nope.txt"));

    let garbled = dir.path().join("garbled.txt");
    std::fs::write(&garbled, "1.0\n2.0\nthree\n").unwrap();
    let o = run(&["estimate", "--input", garbled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":3:"), "{}", stderr(&o));

    let o = run(&["single-arm", "--preset", "fig1a", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));

    // Every selection candidate is discarded on a constant sample.
    let flat = dir.path().join("flat.txt");
    std::fs::write(&flat, "1\n".repeat(100)).unwrap();
    let o = run(&["diagnose-threshold", "--input", flat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}
