//! Exact CVaR of the three cost families next to a brute-force check by
//! sampling.
//!
//! ```text
//! cargo run --release --example exact_cvar
//! ```

use evt_cvar::distributions::Distribution;
use evt_cvar::empirical::{sample_cvar, Sample};
use evt_cvar::rng::RngStream;

fn main() -> evt_cvar::Result<()> {
    let alpha = 0.99;
    let families = [
        Distribution::gpd(0.4, 1.0)?,
        Distribution::gpd(-0.2, 1.0)?,
        Distribution::weibull(1.25, 1.0)?,
        Distribution::weibull(0.75, 1.0)?,
        Distribution::lognormal(0.0, 0.5)?,
        Distribution::lognormal(1.0, 0.9)?,
    ];
    println!("{:<38} {:>12} {:>12} {:>12}", "distribution", "VaR", "CVaR", "sampled");
    for (i, d) in families.iter().enumerate() {
        let draws = d.sample_iid(400_000, &mut RngStream::new(1, i as u64));
        let sampled = sample_cvar(&Sample::from_values(draws)?, alpha)?.value;
        println!(
            "{:<38} {:>12.5} {:>12.5} {:>12.5}",
            d.to_string(),
            d.quantile(alpha)?,
            d.cvar_exact(alpha)?,
            sampled
        );
    }

    // Shapes at or above 1 have no finite tail mean.
    match Distribution::gpd(1.2, 1.0)?.cvar_exact(alpha) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("\nGPD(1.2, 1): {e}"),
    }
    Ok(())
}
