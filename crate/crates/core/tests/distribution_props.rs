mod common;

use common::{integrate_to, normal_cdf, normal_inv, Family};
use evt_cvar::distributions::{gpd_cdf, gpd_excess_params, gpd_pdf, gpd_quantile, Distribution};
use evt_cvar::rng::RngStream;
use proptest::prelude::*;

fn family_of(d: &Distribution) -> Family {
    match *d {
        Distribution::Gpd { xi, sigma } => Family::Gpd { xi, sigma },
        Distribution::Weibull { kappa, lambda } => Family::Weibull { kappa, lambda },
        Distribution::Lognormal { mu, sigma } => Family::Lognormal { mu, sigma },
    }
}

fn any_distribution() -> impl Strategy<Value = Distribution> {
    prop_oneof![
        (-0.9..0.95f64, 0.05..20.0f64).prop_map(|(xi, sigma)| Distribution::Gpd { xi, sigma }),
        (0.3..4.0f64, 0.05..20.0f64).prop_map(|(kappa, lambda)| Distribution::Weibull { kappa, lambda }),
        (-3.0..3.0f64, 0.05..2.0f64).prop_map(|(mu, sigma)| Distribution::Lognormal { mu, sigma }),
    ]
}

proptest! {
    #[test]
    fn gpd_quantile_cdf_round_trip(xi in -2.0..3.0f64, sigma in 1e-3..1e3f64, p in 0.0..1.0f64) {
        let q = gpd_quantile(xi, sigma, p).unwrap();
        let back = gpd_cdf(xi, sigma, q).unwrap();
        prop_assert!((back - p).abs() <= 1e-12, "xi={xi} sigma={sigma} p={p} q={q} back={back}");
    }

    #[test]
    fn gpd_round_trip_near_zero_shape(xi in -1e-9..1e-9f64, p in 0.0..1.0f64) {
        let q = gpd_quantile(xi, 1.0, p).unwrap();
        prop_assert!((gpd_cdf(xi, 1.0, q).unwrap() - p).abs() <= 1e-12);
    }

    #[test]
    fn family_quantile_cdf_round_trip(d in any_distribution(), p in 0.0..0.9999f64) {
        let q = d.quantile(p).unwrap();
        prop_assert!((d.cdf(q) - p).abs() <= 1e-12, "{d} p={p}");
    }

    #[test]
    fn cvar_dominates_var(d in any_distribution(), alpha in 0.5..0.9999f64) {
        let var = d.quantile(alpha).unwrap();
        let cvar = d.cvar_exact(alpha).unwrap();
        prop_assert!(cvar >= var, "{d} alpha={alpha}: cvar {cvar} < var {var}");
    }
}

#[test]
fn gpd_pdf_integrates_to_one() {
    for xi in [-0.5, 0.0, 0.4, 0.8] {
        let upper = if xi < 0.0 { -1.0 / xi } else { f64::INFINITY };
        let mass = integrate_to(|y| gpd_pdf(xi, 1.0, y).unwrap(), 0.0, upper);
        assert!((mass - 1.0).abs() < 1e-8, "xi={xi}: {mass}");
    }
}

#[test]
fn family_pdf_matches_oracle_density() {
    let mut g = common::SplitMix(3);
    for d in [
        Distribution::gpd(0.4, 2.0).unwrap(),
        Distribution::gpd(-0.3, 1.0).unwrap(),
        Distribution::weibull(0.75, 1.5).unwrap(),
        Distribution::lognormal(0.5, 0.9).unwrap(),
    ] {
        let f = family_of(&d);
        for _ in 0..200 {
            let x = d.quantile(g.range(0.001, 0.999)).unwrap();
            let (a, b) = (d.pdf(x), f.pdf(x));
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{d} x={x}: {a} vs {b}");
        }
    }
}

/// Excesses of GPD draws over `u` follow the GPD with the excess parameters.
#[test]
fn excess_stability_ks() {
    for (i, xi) in [-0.3, 0.0, 0.4, 0.8].into_iter().enumerate() {
        let d = Distribution::gpd(xi, 1.0).unwrap();
        let draws = d.sample_iid(1_000_000, &mut RngStream::new(77, i as u64));
        let u = gpd_quantile(xi, 1.0, 0.9).unwrap();
        let (xi_u, sigma_u) = gpd_excess_params(xi, 1.0, u).unwrap();
        assert_eq!(xi_u, xi);
        assert!((sigma_u - (1.0 + xi * u)).abs() < 1e-12);

        let mut z: Vec<f64> = draws.iter().filter(|&&y| y > u).map(|&y| y - u).collect();
        z.sort_by(f64::total_cmp);
        let n = z.len() as f64;
        let ks = z
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let g = gpd_cdf(xi_u, sigma_u, x).unwrap();
                (g - j as f64 / n).abs().max(((j + 1) as f64 / n - g).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "xi={xi}: KS {ks} over {} excesses", z.len());
    }
}

fn cvar_grid() -> Vec<Distribution> {
    vec![
        Distribution::gpd(-0.5, 1.0).unwrap(),
        Distribution::gpd(0.0, 2.0).unwrap(),
        Distribution::gpd(0.4, 1.0).unwrap(),
        Distribution::gpd(0.8, 1.0).unwrap(),
        Distribution::weibull(0.75, 1.0).unwrap(),
        Distribution::weibull(1.25, 1.0).unwrap(),
        Distribution::weibull(1.75, 3.0).unwrap(),
        Distribution::lognormal(0.0, 0.5).unwrap(),
        Distribution::lognormal(1.0, 0.9).unwrap(),
    ]
}

#[test]
fn cvar_exact_matches_tail_integral() {
    for d in cvar_grid() {
        for alpha in [0.9, 0.99, 0.999] {
            let exact = d.cvar_exact(alpha).unwrap();
            let oracle = family_of(&d).tail_mean(alpha);
            assert!(((exact - oracle) / oracle).abs() < 1e-6, "{d} alpha={alpha}: {exact} vs {oracle}");
        }
    }
}

/// The variant with `Phi^{-1}(alpha)/sqrt(2)` inside `Phi` is not the tail
/// mean of a lognormal.
#[test]
fn lognormal_sqrt2_variant_disagrees_with_integral() {
    for (mu, sigma) in [(0.0, 0.5), (0.0, 0.9), (1.0, 0.7)] {
        let d = Distribution::lognormal(mu, sigma).unwrap();
        for alpha in [0.95, 0.99, 0.999] {
            let oracle = family_of(&d).tail_mean(alpha);
            let variant = (mu + sigma * sigma / 2.0f64).exp() / (1.0 - alpha)
                * normal_cdf(sigma - normal_inv(alpha) / 2f64.sqrt());
            assert!(((variant - oracle) / oracle).abs() > 1e-2, "mu={mu} sigma={sigma} alpha={alpha}");
            assert!(((d.cvar_exact(alpha).unwrap() - oracle) / oracle).abs() < 1e-6);
        }
    }
}
