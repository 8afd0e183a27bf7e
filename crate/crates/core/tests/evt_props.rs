use evt_cvar::distributions::{gpd_cdf, gpd_quantile, Distribution};
use evt_cvar::empirical::Sample;
use evt_cvar::estimate::Method;
use evt_cvar::evt_estimator::{estimate_evt_cvar, evt_cvar_from_fit, evt_quantile};
use evt_cvar::rng::RngStream;
use evt_cvar::threshold_select::ThresholdConfig;
use proptest::prelude::*;

#[test]
fn exact_inputs_reproduce_quantile_and_cvar() {
    for xi in [0.0, 0.4, 0.8] {
        let d = Distribution::gpd(xi, 1.0).unwrap();
        for level in [0.7, 0.9] {
            let u = gpd_quantile(xi, 1.0, level).unwrap();
            let f_u = gpd_cdf(xi, 1.0, u).unwrap();
            let sigma_u = 1.0 + xi * u;
            for alpha in [0.95, 0.99, 0.999] {
                let q = evt_quantile(u, xi, sigma_u, f_u, alpha).unwrap();
                let q_true = gpd_quantile(xi, 1.0, alpha).unwrap();
                assert!(((q - q_true) / q_true).abs() < 1e-10, "xi={xi} u={u}: {q} vs {q_true}");
                let c = evt_cvar_from_fit(q, u, xi, sigma_u).unwrap();
                let c_true = d.cvar_exact(alpha).unwrap();
                assert!(((c - c_true) / c_true).abs() < 1e-10, "xi={xi} u={u}: {c} vs {c_true}");
            }
        }
    }
}

proptest! {
    #[test]
    fn tail_mean_shifts_with_threshold(
        xi in -0.9..0.95f64,
        sigma in 0.01..100.0f64,
        u in 0.0..100.0f64,
        gap in 0.0..50.0f64,
        c in -50.0..50.0f64,
    ) {
        let q = u + gap;
        let base = evt_cvar_from_fit(q, u, xi, sigma).unwrap();
        let shifted = evt_cvar_from_fit(q + c, u + c, xi, sigma).unwrap();
        prop_assert!((shifted - (base + c)).abs() <= 1e-12 * (base.abs() + c.abs()).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimate_not_below_threshold(family in 0..3u8, shape in 0.0..1.0f64, n in 30..1500usize, seed in any::<u64>()) {
        let d = match family {
            0 => Distribution::gpd(-0.3 + shape, 1.0).unwrap(),
            1 => Distribution::weibull(0.6 + shape, 1.0).unwrap(),
            _ => Distribution::lognormal(0.0, 0.3 + shape).unwrap(),
        };
        let s = Sample::from_values(d.sample_iid(n, &mut RngStream::new(seed, 0))).unwrap();
        let e = estimate_evt_cvar(&s, 0.99, &ThresholdConfig::default()).unwrap();
        if e.method == Method::Evt {
            let u = e.threshold.unwrap();
            prop_assert!(e.value >= u && e.quantile >= u);
        } else {
            prop_assert!(e.threshold.is_none());
        }
    }
}
