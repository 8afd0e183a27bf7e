//! Experiment configs: list presets, override fields, and round-trip through
//! JSON.
//!
//! ```text
//! cargo run --example config_presets
//! ```

use evt_cvar::bandit::Schedule;
use evt_cvar::config;
use evt_cvar::experiments::ExperimentConfig;

fn main() -> evt_cvar::Result<()> {
    for p in config::presets() {
        println!("{:<6} {}", p.name, p.description);
    }

    let cfg = ExperimentConfig {
        runs: 100,
        seed: 7,
        schedule: Some(Schedule::new(vec![(500, 1.0), (5000, 0.05)])?),
        ..config::preset("fig4b")?
    };
    let json = config::to_json(&cfg);
    println!("\n{json}");
    assert_eq!(config::from_json(&json)?, cfg);

    match config::from_json(r#"{"version": 1, "kind": "bandit"}"#) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nincomplete config: {e}"),
    }
    Ok(())
}
