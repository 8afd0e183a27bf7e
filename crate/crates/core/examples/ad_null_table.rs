//! Simulates the null distribution of the Anderson–Darling statistic for a
//! GPD fitted by maximum likelihood and prints the critical-value table used
//! by `threshold_select::ad_pvalue`.
//!
//! ```text
//! cargo run --release --example ad_null_table -- [reps] [n]
//! ```

use evt_cvar::distributions::Distribution;
use evt_cvar::gpd_mle::fit_gpd;
use evt_cvar::rng::RngStream;
use evt_cvar::threshold_select::{ad_statistic, AD_UPPER_TAIL_LEVELS, AD_XI_GRID};

const SEED: u64 = 20_240_601;

fn main() {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().map_or(60_000, |s| s.parse().expect("reps"));
    let n: usize = args.next().map_or(1_000, |s| s.parse().expect("n"));

    println!("// {reps} replications of n = {n} per row, seed {SEED}.");
    println!("#[rustfmt::skip]");
    println!("pub(crate) const CRITICAL: [[f64; {}]; {}] = [", AD_UPPER_TAIL_LEVELS.len(), AD_XI_GRID.len());
    for (row, &xi) in AD_XI_GRID.iter().enumerate() {
        let dist = Distribution::gpd(xi, 1.0).unwrap();
        let mut rng = RngStream::new(SEED, row as u64);
        let mut stats = Vec::with_capacity(reps);
        while stats.len() < reps {
            let mut z = dist.sample_iid(n, &mut rng);
            z.sort_by(f64::total_cmp);
            let Ok(fit) = fit_gpd(&z) else { continue };
            if !fit.converged {
                continue;
            }
            stats.push(ad_statistic(&z, &fit).unwrap());
        }
        stats.sort_by(f64::total_cmp);
        let cells: Vec<String> = AD_UPPER_TAIL_LEVELS
            .iter()
            .map(|&p| {
                let pos = (1.0 - p) * (reps - 1) as f64;
                let (lo, w) = (pos.floor() as usize, pos.fract());
                let hi = (lo + 1).min(reps - 1);
                format!("{:.4}", stats[lo] * (1.0 - w) + stats[hi] * w)
            })
            .collect();
        println!("    [{}], // xi = {xi}", cells.join(", "));
        eprintln!("xi = {xi} done");
    }
    println!("];");
}
