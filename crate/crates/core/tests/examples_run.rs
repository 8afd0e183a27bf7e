//! Runs every example with small arguments. `cargo test` builds examples
//! next to the test binaries, so they are found relative to this executable.

use std::path::PathBuf;
use std::process::Command;

fn example_path(name: &str) -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let mut p = profile_dir.join("examples").join(name);
    if cfg!(windows) {
        p.set_extension("exe");
    }
    p
}

fn run(name: &str, args: &[&str]) -> String {
    let path = example_path(name);
    if !path.exists() {
        // Examples are not built by `cargo test --test examples_run` alone.
        eprintln!("skipping {name}: {} not built", path.display());
        return String::new();
    }
    let out = Command::new(&path).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{name} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exact_cvar() {
    let out = run("exact_cvar", &[]);
    assert!(out.is_empty() || out.contains("not integrable"));
}

#[test]
fn fit_gpd() {
    let out = run("fit_gpd", &[]);
    assert!(out.is_empty() || out.contains("insufficient data"));
}

#[test]
fn estimate_cvar() {
    let out = run("estimate_cvar", &[]);
    assert!(out.is_empty() || out.contains("EVT_FALLBACK_SA"));
}

#[test]
fn threshold_diagnostics() {
    let out = run("threshold_diagnostics", &[]);
    assert!(out.is_empty() || out.matches("<- chosen").count() == 2);
}

#[test]
fn single_arm_study() {
    let out = run("single_arm_study", &["2"]);
    assert!(out.is_empty() || out.lines().count() == 9);
}

#[test]
fn bandit_testbed() {
    let out = run("bandit_testbed", &["2", "300"]);
    assert!(out.is_empty() || out.contains("best arm: 0"));
}

#[test]
fn config_presets() {
    let out = run("config_presets", &[]);
    assert!(out.is_empty() || out.contains("fig4c"));
}

#[test]
fn ad_null_table() {
    let out = run("ad_null_table", &["50", "100"]);
    assert!(out.is_empty() || out.lines().filter(|l| l.contains("// xi =")).count() == 15);
}
