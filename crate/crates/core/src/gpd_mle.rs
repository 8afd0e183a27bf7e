//! Maximum-likelihood fitting of a GPD to threshold excesses, under the
//! integrability constraint `xi < 1`.
//!
//! The two-parameter likelihood is maximized through its profile along
//! `theta = xi / sigma`. For fixed `theta` the optimal shape has the closed
//! form `xi(theta) = mean(ln(1 + theta*z))`, and with `sigma = xi/theta`
//!
//! ```text
//! l(theta) / n = -ln(sigma(theta)) - xi(theta) - 1
//! ```
//!
//! The stationary point is found by Brent root finding on the profile score
//! in the coordinate `r = ln(1 + theta*max(z))`, which maps every real `r` to
//! a support-feasible `theta > -1/max(z)`. Near `theta = 0` the score is
//! evaluated with series expansions so the exponential case carries no
//! cancellation. A score that still points upward when the shape reaches
//! `XI_UPPER` is resolved by maximizing over `sigma` with `xi = XI_UPPER`.

use serde::Serialize;

use crate::distributions::xi_is_zero;
use crate::error::{Error, Result};
use crate::optim;

/// Fewer excesses than this and a fit is not attempted.
pub const MIN_EXCESSES: usize = 10;

/// Hard upper clip on the fitted shape.
pub const XI_UPPER: f64 = 0.99;

/// Below `xi = -1` the GPD likelihood is unbounded, so no MLE exists there.
pub const XI_LOWER: f64 = -1.0;

const ROOT_TOL: f64 = 1e-10;
const ROOT_MAX_ITER: usize = 100;
const BRENT_TOL: f64 = 1e-9;
const BRENT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpdFit {
    pub xi_hat: f64,
    pub sigma_hat: f64,
    pub n_excesses: usize,
    pub log_likelihood: f64,
    pub converged: bool,
}

impl GpdFit {
    /// Upper end of the fitted support (`+inf` unless `xi_hat < 0`).
    pub fn support_bound(&self) -> f64 {
        if self.xi_hat < 0.0 && !xi_is_zero(self.xi_hat) {
            -self.sigma_hat / self.xi_hat
        } else {
            f64::INFINITY
        }
    }
}

/// `sum_z log g_{xi,sigma}(z)`, or `-inf` when any excess lies outside the
/// support or the scale is not positive.
pub fn gpd_loglik(xi: f64, sigma: f64, excesses: &[f64]) -> f64 {
    if !(sigma > 0.0) || !xi.is_finite() {
        return f64::NEG_INFINITY;
    }
    let n = excesses.len() as f64;
    if xi_is_zero(xi) {
        let mut s = 0.0;
        for &z in excesses {
            if z < 0.0 {
                return f64::NEG_INFINITY;
            }
            s += z;
        }
        return -n * sigma.ln() - s / sigma;
    }
    let k = xi / sigma;
    let mut s = 0.0;
    for &z in excesses {
        if z < 0.0 {
            return f64::NEG_INFINITY;
        }
        let t = k * z;
        if t <= -1.0 {
            return f64::NEG_INFINITY;
        }
        s += t.ln_1p();
    }
    let ll = -n * sigma.ln() - (1.0 / xi + 1.0) * s;
    if ll.is_nan() {
        f64::NEG_INFINITY
    } else {
        ll
    }
}

fn validate(excesses: &[f64]) -> Result<f64> {
    if excesses.len() < MIN_EXCESSES {
        return Err(Error::InsufficientData {
            needed: MIN_EXCESSES,
            got: excesses.len(),
        });
    }
    let mut zmax: f64 = 0.0;
    for &z in excesses {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("excesses must be finite and >= 0, got {z}")));
        }
        zmax = zmax.max(z);
    }
    if zmax == 0.0 {
        return Err(Error::Domain("all excesses are zero".into()));
    }
    Ok(zmax)
}

/// Constrained MLE of `(xi, sigma)` from threshold excesses.
pub fn fit_gpd(excesses: &[f64]) -> Result<GpdFit> {
    fit_gpd_with_start(excesses, None)
}

/// Profile quantities at one `theta`.
#[derive(Debug, Clone, Copy)]
struct ProfilePoint {
    xi: f64,
    sigma: f64,
    /// Has the sign of d l / d theta.
    score: f64,
}

impl ProfilePoint {
    fn neg_loglik_per_obs(&self) -> f64 {
        self.sigma.ln() + self.xi + 1.0
    }
}

fn profile_at(z: &[f64], theta: f64) -> ProfilePoint {
    let n = z.len() as f64;
    if theta == 0.0 {
        let m1 = z.iter().sum::<f64>() / n;
        let m2 = z.iter().map(|v| v * v).sum::<f64>() / n;
        return ProfilePoint {
            xi: 0.0,
            sigma: m1,
            score: m2 / (2.0 * m1) - m1,
        };
    }
    // Per excess with x = theta*z:
    //   l = ln(1+x), h = ln(1+x) - x/(1+x) >= 0, a = z/(1+x).
    let (mut sl, mut sh, mut sa) = (0.0, 0.0, 0.0);
    for &zi in z {
        let x = theta * zi;
        let inv = 1.0 / (1.0 + x);
        let (l, h) = if x.abs() < 1e-2 {
            let l = x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x * (1.0 / 6.0 - x / 7.0))))));
            let h = x
                * x
                * (0.5 - x * (2.0 / 3.0 - x * (0.75 - x * (0.8 - x * (5.0 / 6.0 - x * (6.0 / 7.0 - x * 0.875))))));
            (l, h)
        } else {
            let l = (1.0 + x).ln();
            (l, l - x * inv)
        };
        sl += l;
        sh += h;
        sa += zi * inv;
    }
    // d l/d theta = n * (H/(theta*xi) - A) with H = sh/n, A = sa/n.
    ProfilePoint {
        xi: sl / n,
        sigma: sl / (n * theta),
        score: sh / (theta * sl) - sa / n,
    }
}

enum Bracket {
    Found((f64, ProfilePoint), (f64, ProfilePoint)),
    UpperWall(ProfilePoint),
    LowerWall(ProfilePoint),
    Failed(ProfilePoint),
}

/// As [`fit_gpd`], starting the search from `start = (xi, sigma)` instead
/// of the method-of-moments guess.
pub fn fit_gpd_with_start(excesses: &[f64], start: Option<(f64, f64)>) -> Result<GpdFit> {
    let zmax = validate(excesses)?;
    let n = excesses.len() as f64;
    let eval = |r: f64| profile_at(excesses, r.exp_m1() / zmax);

    let (xi0, sigma0, step) = match start {
        Some((xi, sigma)) if sigma > 0.0 && xi.is_finite() => (xi, sigma, 0.05),
        _ => {
            let (xi, sigma) = moment_start(excesses);
            (xi, sigma, 0.25)
        }
    };
    let phi0 = (xi0 / sigma0 * zmax).max(-0.99);
    let r0 = if phi0.is_finite() { phi0.ln_1p() } else { 0.0 };

    let bracket = {
        let p0 = eval(r0);
        let up = p0.score > 0.0;
        let mut prev = (r0, p0);
        let mut h = step;
        let mut out = Bracket::Failed(p0);
        for _ in 0..80 {
            let (_, pp) = prev;
            if !pp.score.is_finite() {
                out = Bracket::Failed(pp);
                break;
            }
            if up && pp.xi > XI_UPPER {
                out = Bracket::UpperWall(pp);
                break;
            }
            if !up && pp.xi < XI_LOWER {
                out = Bracket::LowerWall(pp);
                break;
            }
            let r1 = prev.0 + if up { h } else { -h };
            let p1 = eval(r1);
            if (p1.score > 0.0) != up && p1.score.is_finite() {
                out = Bracket::Found(prev, (r1, p1));
                break;
            }
            prev = (r1, p1);
            h *= 2.0;
        }
        out
    };

    let upper_wall = |p: ProfilePoint| {
        let sigma_start = p.sigma * XI_UPPER / p.xi.max(XI_UPPER);
        fit_at_fixed_shape(excesses, XI_UPPER, sigma_start).unwrap_or(GpdFit {
            xi_hat: XI_UPPER,
            sigma_hat: sigma_start,
            n_excesses: excesses.len(),
            log_likelihood: gpd_loglik(XI_UPPER, sigma_start, excesses),
            converged: false,
        })
    };

    match bracket {
        Bracket::Found((ra, pa), (rb, pb)) => {
            let mut last = (rb, pb);
            let (root, converged) = optim::brent_root(
                &mut |r| {
                    let p = eval(r);
                    last = (r, p);
                    p.score
                },
                (ra, rb),
                (pa.score, pb.score),
                ROOT_TOL,
                ROOT_MAX_ITER,
            );
            let p = if last.0 == root { last.1 } else { eval(root) };
            if p.xi > XI_UPPER {
                return Ok(upper_wall(p));
            }
            Ok(GpdFit {
                xi_hat: p.xi,
                sigma_hat: p.sigma,
                n_excesses: excesses.len(),
                log_likelihood: -n * p.neg_loglik_per_obs(),
                converged: converged && p.xi >= XI_LOWER,
            })
        }
        Bracket::UpperWall(p) => Ok(upper_wall(p)),
        Bracket::LowerWall(p) | Bracket::Failed(p) => {
            let xi = p.xi.clamp(XI_LOWER, XI_UPPER);
            Ok(GpdFit {
                xi_hat: xi,
                sigma_hat: p.sigma,
                n_excesses: excesses.len(),
                log_likelihood: gpd_loglik(xi, p.sigma, excesses),
                converged: false,
            })
        }
    }
}

fn moment_start(excesses: &[f64]) -> (f64, f64) {
    let n = excesses.len() as f64;
    let mean = excesses.iter().sum::<f64>() / n;
    let var = excesses.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let xi = if var > 0.0 {
        (0.5 * (1.0 - mean * mean / var)).clamp(-0.5, 0.9)
    } else {
        0.0
    };
    (xi, (mean * (1.0 - xi)).max(f64::MIN_POSITIVE))
}

/// Maximizes the likelihood over `sigma` with the shape held at `xi`.
fn fit_at_fixed_shape(excesses: &[f64], xi: f64, sigma_start: f64) -> Option<GpdFit> {
    let mut objective = |log_sigma: f64| -> f64 {
        let ll = gpd_loglik(xi, log_sigma.exp(), excesses);
        if ll.is_finite() {
            -ll
        } else {
            f64::INFINITY
        }
    };
    let (a, b, c, fb) = optim::bracket(&mut objective, sigma_start.ln(), 0.2, 80)?;
    let m = optim::brent(&mut objective, (a, b, c), fb, BRENT_TOL, BRENT_MAX_ITER);
    Some(GpdFit {
        xi_hat: xi,
        sigma_hat: m.x.exp(),
        n_excesses: excesses.len(),
        log_likelihood: -m.fx,
        converged: m.converged,
    })
}
