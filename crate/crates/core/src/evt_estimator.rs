//! CVaR by peaks over threshold: select `u`, fit a GPD to the excesses, then
//! read the quantile and the tail mean off the fitted tail.

use crate::distributions::xi_is_zero;
use crate::empirical::{check_level, empirical_cdf, sample_cvar, Sample};
use crate::error::{Error, Result};
use crate::estimate::{CvarEstimate, Method};
use crate::threshold_select::{select_threshold, ThresholdConfig, ThresholdSelection};

/// Below this many observations the EVT pipeline is not attempted.
pub const SA_FALLBACK_MIN: usize = 30;

/// Tail quantile from a GPD fitted above `u`, where `f_at_u` is the
/// (empirical) CDF at `u`:
///
/// ```text
/// q = u + (sigma/xi) * [((1 - alpha) / (1 - F(u)))^(-xi) - 1]
/// ```
///
/// with the limit `u + sigma * ln((1 - F(u)) / (1 - alpha))` at `xi = 0`.
pub fn evt_quantile(u: f64, xi_hat: f64, sigma_hat: f64, f_at_u: f64, alpha: f64) -> Result<f64> {
    check_level(alpha)?;
    if !(sigma_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma_hat}")));
    }
    if !(0.0..1.0).contains(&f_at_u) {
        return Err(Error::Domain(format!("F(u) must be in [0, 1), got {f_at_u}")));
    }
    if alpha < f_at_u {
        return Err(Error::Domain(format!(
            "threshold lies above the target quantile: F(u) = {f_at_u} > alpha = {alpha}"
        )));
    }
    // ln of (1 - F(u)) / (1 - alpha), >= 0
    let log_ratio = (-f_at_u).ln_1p() - (-alpha).ln_1p();
    if xi_is_zero(xi_hat) {
        Ok(u + sigma_hat * log_ratio)
    } else {
        Ok(u + sigma_hat / xi_hat * (xi_hat * log_ratio).exp_m1())
    }
}

/// Mean of the fitted tail beyond `q_hat`: `q + (sigma + xi*(q - u)) / (1 - xi)`.
pub fn evt_cvar_from_fit(q_hat: f64, u: f64, xi_hat: f64, sigma_hat: f64) -> Result<f64> {
    if !(xi_hat < 1.0) {
        return Err(Error::NonIntegrableTail { xi: xi_hat });
    }
    if !(sigma_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma_hat}")));
    }
    if q_hat < u {
        return Err(Error::Domain(format!("quantile {q_hat} lies below the threshold {u}")));
    }
    Ok(q_hat + (sigma_hat + xi_hat * (q_hat - u)) / (1.0 - xi_hat))
}

/// EVT estimate of `CVaR_alpha`. Falls back to the sample average (tagged
/// [`Method::EvtFallbackSa`]) when the sample is smaller than
/// [`SA_FALLBACK_MIN`], when threshold selection fails, or when the chosen
/// threshold already sits above the empirical `alpha`-quantile.
pub fn estimate_evt_cvar(sample: &Sample, alpha: f64, config: &ThresholdConfig) -> Result<CvarEstimate> {
    estimate_evt_cvar_with_selection(sample, alpha, config).map(|(e, _)| e)
}

/// As [`estimate_evt_cvar`], also returning the threshold diagnostics when
/// selection ran to completion.
pub fn estimate_evt_cvar_with_selection(
    sample: &Sample,
    alpha: f64,
    config: &ThresholdConfig,
) -> Result<(CvarEstimate, Option<ThresholdSelection>)> {
    check_level(alpha)?;
    if sample.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let fallback = |selection| -> Result<_> {
        let mut e = sample_cvar(sample, alpha)?;
        e.method = Method::EvtFallbackSa;
        Ok((e, selection))
    };
    if sample.len() < SA_FALLBACK_MIN {
        return fallback(None);
    }
    let selection = match select_threshold(sample, alpha, config) {
        Ok(s) => s,
        Err(Error::InsufficientData { .. } | Error::SelectionFailed(_)) => return fallback(None),
        Err(e) => return Err(e),
    };
    let u = selection.chosen().u;
    let fit = *selection.chosen_fit();
    let f_u = empirical_cdf(sample, u)?;
    if f_u > alpha {
        return fallback(Some(selection));
    }
    let q = evt_quantile(u, fit.xi_hat, fit.sigma_hat, f_u, alpha)?;
    let value = evt_cvar_from_fit(q, u, fit.xi_hat, fit.sigma_hat)?;
    let estimate = CvarEstimate {
        value,
        method: Method::Evt,
        alpha,
        threshold: Some(u),
        fit: Some(fit),
        quantile: q,
        ci: None,
    };
    Ok((estimate, Some(selection)))
}
