//! SA and EVT estimates of CVaR on one heavy-tailed sample, with a bootstrap
//! band for SA and a delta-method band for EVT.
//!
//! ```text
//! cargo run --release --example estimate_cvar
//! ```

use evt_cvar::confidence::{bootstrap_cvar_ci, delta_method_ci};
use evt_cvar::distributions::Distribution;
use evt_cvar::empirical::{sample_cvar, Sample};
use evt_cvar::evt_estimator::estimate_evt_cvar;
use evt_cvar::rng::RngStream;
use evt_cvar::threshold_select::ThresholdConfig;

fn main() -> evt_cvar::Result<()> {
    let alpha = 0.999;
    let dist = Distribution::gpd(0.6, 1.0)?;
    let truth = dist.cvar_exact(alpha)?;
    let sample = Sample::from_values(dist.sample_iid(5000, &mut RngStream::new(2024, 0)))?;

    let sa = sample_cvar(&sample, alpha)?;
    let ci = bootstrap_cvar_ci(&sample, alpha, 0.9, 1000, &mut RngStream::new(2024, 1))?;
    println!("true CVaR      {truth:10.3}");
    println!("SA  estimate   {:10.3}  90% bootstrap [{:.3}, {:.3}]", sa.value, ci.lo, ci.hi);

    let evt = estimate_evt_cvar(&sample, alpha, &ThresholdConfig::default())?;
    print!("{:<4}estimate   {:10.3}", evt.method.to_string(), evt.value);
    if let (Some(fit), Some(u)) = (evt.fit, evt.threshold) {
        let sorted = sample.sorted();
        let excesses: Vec<f64> = sorted[sorted.partition_point(|&v| v <= u)..]
            .iter()
            .map(|&y| y - u)
            .collect();
        match delta_method_ci(&fit, u, evt.quantile, &excesses, 0.9) {
            Ok(ci) => print!("  90% delta     [{:.3}, {:.3}]", ci.lo, ci.hi),
            Err(e) => print!("  ({e})"),
        }
        println!("\n    u = {u:.4}, xi_hat = {:.4}, sigma_hat = {:.4}, {} excesses", fit.xi_hat, fit.sigma_hat, fit.n_excesses);
    } else {
        println!();
    }

    // Small samples skip the tail model entirely.
    let tiny = sample.prefix(20);
    let e = estimate_evt_cvar(&tiny, alpha, &ThresholdConfig::default())?;
    println!("\n20 observations -> method {}, value {:.3}", e.method, e.value);
    Ok(())
}
