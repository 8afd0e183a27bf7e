//! Epsilon-greedy bandit over five GPD arms, steering by SA or EVT CVaR
//! estimates. Prints the Percent Best Action averaged over stage windows.
//!
//! ```text
//! cargo run --release --example bandit_testbed -- [runs] [stages]
//! ```

use evt_cvar::bandit::{run_episode, BanditEnv, EstimatorKind, Schedule};
use evt_cvar::config;
use evt_cvar::experiments::{run_bandit_testbed, ExperimentConfig};
use evt_cvar::threshold_select::ThresholdConfig;

fn main() -> evt_cvar::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs = args.next().map_or(4, |s| s.parse().expect("runs"));
    let stages: usize = args.next().map_or(1500, |s| s.parse().expect("stages"));

    let base = config::preset("fig4a")?;
    let env = BanditEnv::new(base.arms.clone(), stages, base.alpha)?;
    for (j, (d, c)) in env.arms().iter().zip(env.exact_cvar()).enumerate() {
        println!("arm {j}: {d:<30} CVaR = {c:9.2}");
    }
    println!("best arm: {}\n", env.best_arm());

    // A single episode, stage by stage.
    let recs = run_episode(&env, &Schedule::standard(stages), EstimatorKind::Sa, ThresholdConfig::default(), 3, 0)?;
    let mut pulls = vec![0usize; env.k()];
    for r in &recs {
        pulls[r.arm] += 1;
    }
    println!("one SA episode, pulls per arm: {pulls:?}\n");

    let cfg = ExperimentConfig {
        runs,
        stages,
        schedule: Some(Schedule::new(vec![(stages / 3, 1.0), (stages, 0.1)])?),
        ..base
    };
    let rows = run_bandit_testbed(&cfg, None)?;
    println!("{:>12} {:>8} {:>8}", "stages", "SA", "EVT");
    for w in rows.chunks(stages / 6) {
        let n = w.len() as f64;
        let sa = w.iter().map(|r| r.pct_best_sa).sum::<f64>() / n;
        let evt = w.iter().map(|r| r.pct_best_evt).sum::<f64>() / n;
        println!("{:>5}..{:<5} {sa:>8.3} {evt:>8.3}", w[0].t, w[w.len() - 1].t);
    }
    Ok(())
}
