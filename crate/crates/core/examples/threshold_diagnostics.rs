//! Walks through automated threshold selection: the candidate grid, the
//! Anderson–Darling p-values and the ForwardStop cutoff.
//!
//! Lognormal data are not GPD at any finite threshold, so low candidates tend
//! to be rejected and the cutoff moves up the grid.
//!
//! ```text
//! cargo run --release --example threshold_diagnostics
//! ```

use evt_cvar::distributions::Distribution;
use evt_cvar::empirical::Sample;
use evt_cvar::rng::RngStream;
use evt_cvar::threshold_select::{select_threshold, ThresholdConfig};

fn main() -> evt_cvar::Result<()> {
    let config = ThresholdConfig { candidates: 20, gamma: 0.1 };
    for dist in [Distribution::gpd(0.3, 1.0)?, Distribution::lognormal(0.0, 0.9)?] {
        let sample = Sample::from_values(dist.sample_iid(20_000, &mut RngStream::new(5, 0)))?;
        let sel = select_threshold(&sample, 0.999, &config)?;
        println!("{dist}");
        println!("{:>7} {:>9} {:>6} {:>7} {:>7} {:>7}", "level", "u", "n", "xi_hat", "A2", "p");
        for (i, c) in sel.candidates.iter().enumerate() {
            let mark = if i == sel.chosen_index { "  <- chosen" } else { "" };
            match (c.fit, c.ad_stat, c.p_value) {
                (Some(f), Some(a2), Some(p)) => println!(
                    "{:>7.4} {:>9.4} {:>6} {:>7.3} {:>7.3} {:>7.3}{mark}",
                    c.quantile_level, c.u, c.n_excesses, f.xi_hat, a2, p
                ),
                _ => println!("{:>7.4} {:>9.4} {:>6}  discarded ({:?})", c.quantile_level, c.u, c.n_excesses, c.discarded),
            }
        }
        println!("ForwardStop cutoff: {:?}, low confidence: {}\n", sel.k_hat, sel.low_confidence);
    }
    Ok(())
}
