//! A small single-arm study: RMSE of both estimators and the share of runs
//! where EVT lands closer to the truth, as the sample grows.
//!
//! ```text
//! cargo run --release --example single_arm_study -- [runs]
//! ```

use evt_cvar::config;
use evt_cvar::experiments::{run_single_arm, ExperimentConfig, Stride};

fn main() -> evt_cvar::Result<()> {
    let runs = std::env::args().nth(1).map_or(10, |s| s.parse().expect("runs"));
    let cfg = ExperimentConfig {
        runs,
        stages: 2000,
        stride: Stride { dense_until: 0, every: 250 },
        seed: 1,
        ..config::preset("fig1c")?
    };
    let rows = run_single_arm(&cfg, None)?;
    println!("{:>6} {:>12} {:>12} {:>9}", "t", "rmse_sa", "rmse_evt", "closer");
    for r in rows {
        println!("{:>6} {:>12.3} {:>12.3} {:>9.2}", r.t, r.rmse_sa, r.rmse_evt, r.fraction_closer);
    }
    Ok(())
}
