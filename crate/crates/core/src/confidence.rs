//! Confidence intervals for CVaR: a percentile bootstrap around the sample
//! average, and a delta-method band around the EVT estimate built from the
//! observed Fisher information of the GPD fit.

use serde::Serialize;

use crate::empirical::{check_level, quantile_rank, sorted_cvar, Sample};
use crate::error::{Error, Result};
use crate::evt_estimator::evt_cvar_from_fit;
use crate::gpd_mle::{GpdFit, XI_LOWER, XI_UPPER};
use crate::rng::RngStream;
use crate::special::norm_inv;

/// Fewest bootstrap resamples accepted.
pub const MIN_RESAMPLES: usize = 100;

/// The delta method needs the fitted shape at least this far inside the
/// constraint box.
pub const BOUNDARY_MARGIN: f64 = 1e-3;

// Below this |xi*z/sigma| the shape derivatives switch to series form.
const SERIES_CUTOFF: f64 = 0.1;
const SERIES_TERMS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CiMethod {
    #[serde(rename = "BOOTSTRAP")]
    Bootstrap,
    #[serde(rename = "DELTA")]
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: CiMethod,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Percentile bootstrap band for the sample CVaR. Draws `m` resamples of the
/// sample size with replacement and returns the order statistics
/// `ceil(m(1-level)/2)` and `ceil(m(1+level)/2)` of the resampled estimates.
pub fn bootstrap_cvar_ci(
    sample: &Sample,
    alpha: f64,
    level: f64,
    m: usize,
    rng: &mut RngStream,
) -> Result<ConfidenceInterval> {
    check_level(alpha)?;
    check_level(level)?;
    if sample.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if m < MIN_RESAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_RESAMPLES} bootstrap resamples, got {m}"
        )));
    }
    let sorted = sample.sorted();
    let t = sorted.len();
    let mut counts = vec![0u32; t];
    let mut resample = Vec::with_capacity(t);
    let mut estimates = Vec::with_capacity(m);
    for _ in 0..m {
        counts.fill(0);
        for _ in 0..t {
            counts[rng.index(t)] += 1;
        }
        // Drawing positions in the sorted sample yields a sorted resample
        // without a sort.
        resample.clear();
        for (&v, &c) in sorted.iter().zip(&counts) {
            resample.extend(std::iter::repeat_n(v, c as usize));
        }
        estimates.push(sorted_cvar(&resample, alpha));
    }
    estimates.sort_by(f64::total_cmp);
    let (lo_rank, hi_rank) = bootstrap_ranks(m, level);
    Ok(ConfidenceInterval {
        lo: estimates[lo_rank - 1],
        hi: estimates[hi_rank - 1],
        level,
        method: CiMethod::Bootstrap,
    })
}

/// 1-based order-statistic ranks of the percentile band.
pub fn bootstrap_ranks(m: usize, level: f64) -> (usize, usize) {
    (
        quantile_rank((1.0 - level) / 2.0, m),
        quantile_rank((1.0 + level) / 2.0, m),
    )
}

/// First and second partial derivatives of `ln g_{xi,sigma}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoglikDerivs {
    pub d_sigma: f64,
    pub d_xi: f64,
    pub d_sigma_sigma: f64,
    pub d_sigma_xi: f64,
    pub d_xi_xi: f64,
}

/// Analytic derivatives of the GPD log-density at one excess `z`. With
/// `w = sigma + xi*z`:
///
/// ```text
/// d_sigma       = -1/sigma + (1+xi) z / (sigma w)
/// d_xi          = ln(w/sigma)/xi^2 - (1+xi) z / (xi w)
/// d_sigma_sigma = 1/sigma^2 - (1+xi) z (sigma + w) / (sigma^2 w^2)
/// d_sigma_xi    = z (sigma - z) / (sigma w^2)
/// d_xi_xi       = -2 ln(w/sigma)/xi^3 + z (2 sigma + 3 xi z + xi^2 z) / (xi^2 w^2)
/// ```
///
/// The two shape derivatives cancel badly when `xi*z/sigma` is small; there
/// they are summed as power series, which also gives the `xi = 0` limits.
pub fn gpd_loglik_derivs(xi: f64, sigma: f64, z: f64) -> Result<LoglikDerivs> {
    if !(sigma > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid GPD parameters ({xi}, {sigma})")));
    }
    let s = z / sigma;
    let x = xi * s;
    if !(z >= 0.0) || !(x > -1.0) {
        return Err(Error::Domain(format!("z = {z} outside the support of GPD({xi}, {sigma})")));
    }
    let w = sigma + xi * z;
    let d_sigma = -1.0 / sigma + (1.0 + xi) * z / (sigma * w);
    let d_sigma_sigma = 1.0 / (sigma * sigma) - (1.0 + xi) * z * (sigma + w) / (sigma * sigma * w * w);
    let d_sigma_xi = z * (sigma - z) / (sigma * w * w);

    let (d_xi, d_xi_xi) = if x.abs() < SERIES_CUTOFF {
        // ln(1+x) - x/(1+x)           = sum_{m>=2} (-1)^m (m-1)/m x^m
        // -2 ln(1+x) + x(2+3x)/(1+x)^2 = sum_{m>=3} (-1)^m (m-3+2/m) x^m
        let (mut a, mut b) = (0.0, 0.0);
        let mut pow = 1.0; // (-x)^k
        for k in 0..SERIES_TERMS {
            let m2 = (k + 2) as f64;
            let m3 = (k + 3) as f64;
            a += pow * (m2 - 1.0) / m2;
            b -= pow * (m3 - 3.0 + 2.0 / m3);
            pow *= -x;
        }
        let opx = 1.0 + x;
        (s * s * a - s / opx, s * s * s * b + s * s / (opx * opx))
    } else {
        let lw = x.ln_1p();
        (
            lw / (xi * xi) - (1.0 + xi) * z / (xi * w),
            -2.0 * lw / (xi * xi * xi)
                + z * (2.0 * sigma + 3.0 * xi * z + xi * xi * z) / (xi * xi * w * w),
        )
    };
    Ok(LoglikDerivs {
        d_sigma,
        d_xi,
        d_sigma_sigma,
        d_sigma_xi,
        d_xi_xi,
    })
}

/// Observed Fisher information per excess over `(xi, sigma)`: the negated
/// mean of the second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInfo {
    pub xi_xi: f64,
    pub xi_sigma: f64,
    pub sigma_sigma: f64,
}

impl FisherInfo {
    pub fn observed(xi: f64, sigma: f64, excesses: &[f64]) -> Result<Self> {
        if excesses.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for &z in excesses {
            let d = gpd_loglik_derivs(xi, sigma, z)?;
            a += d.d_xi_xi;
            b += d.d_sigma_xi;
            c += d.d_sigma_sigma;
        }
        let n = excesses.len() as f64;
        Ok(Self {
            xi_xi: -a / n,
            xi_sigma: -b / n,
            sigma_sigma: -c / n,
        })
    }

    pub fn determinant(&self) -> f64 {
        self.xi_xi * self.sigma_sigma - self.xi_sigma * self.xi_sigma
    }

    pub fn is_positive_definite(&self) -> bool {
        self.xi_xi > 0.0 && self.determinant() > 0.0
    }

    /// `g^T I^{-1} g` for `g = (g_xi, g_sigma)`; `None` unless positive definite.
    pub fn inverse_quadratic_form(&self, g_xi: f64, g_sigma: f64) -> Option<f64> {
        if !self.is_positive_definite() {
            return None;
        }
        let det = self.determinant();
        Some(
            (g_xi * g_xi * self.sigma_sigma - 2.0 * g_xi * g_sigma * self.xi_sigma
                + g_sigma * g_sigma * self.xi_xi)
                / det,
        )
    }
}

/// Gradient of `h(xi, sigma) = q + (sigma + xi (q - u)) / (1 - xi)` as
/// `(dh/dxi, dh/dsigma)`.
pub fn evt_cvar_gradient(xi: f64, sigma: f64, u: f64, q_hat: f64) -> (f64, f64) {
    let r = 1.0 - xi;
    ((q_hat - u + sigma) / (r * r), 1.0 / r)
}

/// Symmetric normal band around the EVT CVaR with variance
/// `grad^T I^{-1} grad / N_u`, holding `q_hat` fixed.
pub fn delta_method_ci(
    fit: &GpdFit,
    u: f64,
    q_hat: f64,
    excesses: &[f64],
    level: f64,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    let (xi, sigma) = (fit.xi_hat, fit.sigma_hat);
    if !(xi > XI_LOWER + BOUNDARY_MARGIN && xi < XI_UPPER - BOUNDARY_MARGIN) {
        return Err(Error::CiUnavailable(format!("fitted shape {xi} is on the constraint boundary")));
    }
    let center = evt_cvar_from_fit(q_hat, u, xi, sigma)?;
    let info = FisherInfo::observed(xi, sigma, excesses)?;
    let (gx, gs) = evt_cvar_gradient(xi, sigma, u, q_hat);
    let quad = info
        .inverse_quadratic_form(gx, gs)
        .ok_or_else(|| Error::CiUnavailable("information matrix is not positive definite".into()))?;
    let half = norm_inv(0.5 * (1.0 + level)) * (quad / excesses.len() as f64).sqrt();
    Ok(ConfidenceInterval {
        lo: center - half,
        hi: center + half,
        level,
        method: CiMethod::Delta,
    })
}
