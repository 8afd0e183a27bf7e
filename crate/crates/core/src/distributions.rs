//! Parametric cost distributions used as ground truth: the generalized Pareto
//! distribution (GPD), Weibull and lognormal.
//!
//! The GPD with shape `xi` and scale `sigma` has CDF
//!
//! ```text
//! G(y) = 1 - (1 + xi*y/sigma)^(-1/xi)   xi != 0
//! G(y) = 1 - exp(-y/sigma)              xi == 0
//! ```
//!
//! on `y >= 0`, with the support capped at `-sigma/xi` when `xi < 0`. All
//! three families expose density, CDF, quantile, inverse-transform sampling
//! and a closed-form CVaR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{norm_cdf, norm_inv, upper_incomplete_gamma};

/// Below this magnitude the shape is treated as exactly zero (exponential).
pub const XI_ZERO_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn xi_is_zero(xi: f64) -> bool {
    xi.abs() < XI_ZERO_TOL
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

/// GPD density `g_{xi,sigma}(y)`; zero outside the support.
pub fn gpd_pdf(xi: f64, sigma: f64, y: f64) -> Result<f64> {
    check_scale("sigma", sigma)?;
    check_finite("xi", xi)?;
    Ok(gpd_pdf_unchecked(xi, sigma, y))
}

#[inline]
pub(crate) fn gpd_pdf_unchecked(xi: f64, sigma: f64, y: f64) -> f64 {
    if y < 0.0 {
        return 0.0;
    }
    if xi_is_zero(xi) {
        return (-y / sigma).exp() / sigma;
    }
    let t = xi * y / sigma;
    if t < -1.0 {
        return 0.0;
    }
    if t == -1.0 {
        // Right endpoint of a bounded support.
        return match xi.partial_cmp(&-1.0) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Equal) => 1.0 / sigma,
            _ => f64::INFINITY,
        };
    }
    (-(1.0 / xi + 1.0) * t.ln_1p()).exp() / sigma
}

/// GPD CDF `G_{xi,sigma}(y)`: 0 below the support, 1 above it.
pub fn gpd_cdf(xi: f64, sigma: f64, y: f64) -> Result<f64> {
    check_scale("sigma", sigma)?;
    check_finite("xi", xi)?;
    Ok(gpd_cdf_unchecked(xi, sigma, y))
}

#[inline]
pub(crate) fn gpd_cdf_unchecked(xi: f64, sigma: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if xi_is_zero(xi) {
        return -(-y / sigma).exp_m1();
    }
    let t = xi * y / sigma;
    if t <= -1.0 {
        return 1.0;
    }
    -(-t.ln_1p() / xi).exp_m1()
}

/// GPD quantile: the `q` with `G(q) = p`, for `p` in `[0, 1)`.
pub fn gpd_quantile(xi: f64, sigma: f64, p: f64) -> Result<f64> {
    check_scale("sigma", sigma)?;
    check_finite("xi", xi)?;
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!("GPD quantile level must be in [0, 1), got {p}")));
    }
    Ok(gpd_quantile_unchecked(xi, sigma, p))
}

#[inline]
pub(crate) fn gpd_quantile_unchecked(xi: f64, sigma: f64, p: f64) -> f64 {
    let log_tail = (-p).ln_1p();
    if xi_is_zero(xi) {
        -sigma * log_tail
    } else {
        sigma / xi * (-xi * log_tail).exp_m1()
    }
}

/// Parameters of the excess distribution of `Y - u` given `Y > u` when `Y` is
/// GPD: the shape is unchanged and the scale becomes `sigma + xi*u`.
pub fn gpd_excess_params(xi: f64, sigma: f64, u: f64) -> Result<(f64, f64)> {
    check_scale("sigma", sigma)?;
    check_finite("xi", xi)?;
    if u < 0.0 {
        return Err(Error::Domain(format!("threshold must be >= 0, got {u}")));
    }
    let scale = sigma + xi * u;
    if scale <= 0.0 {
        return Err(Error::Domain(format!(
            "threshold {u} is at or beyond the upper support bound {}",
            -sigma / xi
        )));
    }
    Ok((xi, scale))
}

/// A parametric cost distribution.
///
/// Serialized as `{"family": "gpd", "params": {"xi": .., "sigma": ..}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum Distribution {
    Gpd { xi: f64, sigma: f64 },
    Weibull { kappa: f64, lambda: f64 },
    Lognormal { mu: f64, sigma: f64 },
}

impl Distribution {
    pub fn gpd(xi: f64, sigma: f64) -> Result<Self> {
        let d = Distribution::Gpd { xi, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn weibull(kappa: f64, lambda: f64) -> Result<Self> {
        let d = Distribution::Weibull { kappa, lambda };
        d.validate()?;
        Ok(d)
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        let d = Distribution::Lognormal { mu, sigma };
        d.validate()?;
        Ok(d)
    }

    /// Checks the parameter constraints. Needed after deserialization.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Distribution::Gpd { xi, sigma } => {
                check_finite("xi", xi)?;
                check_scale("sigma", sigma)
            }
            Distribution::Weibull { kappa, lambda } => {
                check_scale("kappa", kappa)?;
                check_scale("lambda", lambda)
            }
            Distribution::Lognormal { mu, sigma } => {
                check_finite("mu", mu)?;
                check_scale("sigma", sigma)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Distribution::Gpd { .. } => "gpd",
            Distribution::Weibull { .. } => "weibull",
            Distribution::Lognormal { .. } => "lognormal",
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Distribution::Gpd { xi, sigma } => gpd_pdf_unchecked(xi, sigma, x),
            Distribution::Weibull { kappa, lambda } => {
                if x < 0.0 {
                    return 0.0;
                }
                let z = x / lambda;
                kappa / lambda * z.powf(kappa - 1.0) * (-z.powf(kappa)).exp()
            }
            Distribution::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / ((2.0 * std::f64::consts::PI).sqrt() * sigma * x)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Distribution::Gpd { xi, sigma } => gpd_cdf_unchecked(xi, sigma, x),
            Distribution::Weibull { kappa, lambda } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / lambda).powf(kappa)).exp_m1()
                }
            }
            Distribution::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    norm_cdf((x.ln() - mu) / sigma)
                }
            }
        }
    }

    /// Quantile at level `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!("quantile level must be in [0, 1), got {p}")));
        }
        Ok(self.quantile_unchecked(p))
    }

    fn quantile_unchecked(&self, p: f64) -> f64 {
        match *self {
            Distribution::Gpd { xi, sigma } => gpd_quantile_unchecked(xi, sigma, p),
            Distribution::Weibull { kappa, lambda } => {
                lambda * (-(-p).ln_1p()).powf(1.0 / kappa)
            }
            Distribution::Lognormal { mu, sigma } => (mu + sigma * norm_inv(p)).exp(),
        }
    }

    /// One inverse-transform draw.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile_unchecked(rng.uniform())
    }

    /// `n` i.i.d. draws by inverse transform; deterministic given `rng`.
    pub fn sample_iid(&self, n: usize, rng: &mut RngStream) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// Exact `CVaR_alpha = E[X | X >= q_alpha]`.
    pub fn cvar_exact(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must be in (0, 1), got {alpha}")));
        }
        self.validate()?;
        match *self {
            Distribution::Gpd { xi, sigma } => {
                if xi >= 1.0 {
                    return Err(Error::NonIntegrableTail { xi });
                }
                let q = gpd_quantile_unchecked(xi, sigma, alpha);
                Ok(q + (sigma + xi * q) / (1.0 - xi))
            }
            Distribution::Weibull { kappa, lambda } => {
                let b = -(-alpha).ln_1p();
                Ok(lambda / (1.0 - alpha) * upper_incomplete_gamma(1.0 + 1.0 / kappa, b))
            }
            Distribution::Lognormal { mu, sigma } => {
                // Tail of a lognormal: E[X; X >= q] = e^{mu + sigma^2/2} Phi(sigma - z_alpha).
                let z = norm_inv(alpha);
                Ok((mu + 0.5 * sigma * sigma).exp() / (1.0 - alpha) * norm_cdf(sigma - z))
            }
        }
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Distribution::Gpd { xi, sigma } => write!(f, "GPD(xi={xi}, sigma={sigma})"),
            Distribution::Weibull { kappa, lambda } => {
                write!(f, "Weibull(kappa={kappa}, lambda={lambda})")
            }
            Distribution::Lognormal { mu, sigma } => write!(f, "Lognormal(mu={mu}, sigma={sigma})"),
        }
    }
}
