//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Density written out from the textbook definitions.
#[derive(Debug, Clone, Copy)]
pub enum Family {
    Gpd { xi: f64, sigma: f64 },
    Weibull { kappa: f64, lambda: f64 },
    Lognormal { mu: f64, sigma: f64 },
}

impl Family {
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Family::Gpd { xi, sigma } => {
                if x < 0.0 {
                    return 0.0;
                }
                if xi == 0.0 {
                    return (-x / sigma).exp() / sigma;
                }
                let b = 1.0 + xi * x / sigma;
                if b <= 0.0 {
                    0.0
                } else {
                    b.powf(-1.0 / xi - 1.0) / sigma
                }
            }
            Family::Weibull { kappa, lambda } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let r = x / lambda;
                kappa / lambda * r.powf(kappa - 1.0) * (-r.powf(kappa)).exp()
            }
            Family::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma * x)
            }
        }
    }

    /// Upper end of the support.
    pub fn upper(&self) -> f64 {
        match *self {
            Family::Gpd { xi, sigma } if xi < 0.0 => -sigma / xi,
            _ => f64::INFINITY,
        }
    }

    /// `P(X > x)`: closed form for GPD and Weibull, quadrature of the density
    /// for the lognormal.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Family::Gpd { xi, sigma } => {
                if x <= 0.0 {
                    1.0
                } else if xi == 0.0 {
                    (-x / sigma).exp()
                } else {
                    let b = 1.0 + xi * x / sigma;
                    if b <= 0.0 {
                        0.0
                    } else {
                        b.powf(-1.0 / xi)
                    }
                }
            }
            Family::Weibull { kappa, lambda } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / lambda).powf(kappa)).exp()
                }
            }
            Family::Lognormal { .. } => {
                if x <= 0.0 {
                    1.0
                } else {
                    integrate_to(|y| self.pdf(y), x, self.upper())
                }
            }
        }
    }

    /// `alpha`-quantile by bisection on the survival function.
    pub fn quantile(&self, alpha: f64) -> f64 {
        let target = 1.0 - alpha;
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.survival(hi) > target {
            hi *= 2.0;
            if hi > self.upper() {
                hi = self.upper();
                break;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.survival(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(1/(1-alpha)) * int_{q}^{upper} x f(x) dx`.
    pub fn tail_mean(&self, alpha: f64) -> f64 {
        let q = self.quantile(alpha);
        integrate_to(|x| x * self.pdf(x), q, self.upper()) / (1.0 - alpha)
    }
}

/// `int_a^b f`: tanh-sinh on a finite interval, exp-sinh when `b = inf`.
/// Step halving until two levels agree to about 1e-14.
pub fn integrate_to(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b.is_infinite() {
        exp_sinh(f, a)
    } else {
        tanh_sinh(f, a, b)
    }
}

fn refine(mut level: impl FnMut(f64, usize) -> f64) -> f64 {
    let mut h = 1.0;
    let mut prev = level(h, 0);
    for k in 1..12 {
        h *= 0.5;
        let cur = level(h, k);
        if (cur - prev).abs() <= 1e-14 * cur.abs() && k > 3 {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let r = 0.5 * (b - a);
    refine(|h, _| {
        let mut s = 0.0;
        let n = (6.0 / h) as i64;
        for i in -n..=n {
            let t = i as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            // Distance to the nearer endpoint, kept accurate near it.
            let d = r / (u.abs().exp() * u.abs().cosh());
            let x = if u < 0.0 { a + d } else { b - d };
            if d > 0.0 && x > a && x < b {
                let v = f(x) * w;
                if v.is_finite() {
                    s += v;
                }
            }
        }
        s * h * r
    })
}

fn exp_sinh(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    refine(|h, _| {
        let mut s = 0.0;
        let n = (5.0 / h) as i64;
        for i in -n..=n {
            let t = i as f64 * h;
            let e = (FRAC_PI_2 * t.sinh()).exp();
            let w = FRAC_PI_2 * t.cosh() * e;
            let x = a + e;
            if x > a && x.is_finite() && w.is_finite() {
                let v = f(x) * w;
                if v.is_finite() {
                    s += v;
                }
            }
        }
        s * h
    })
}

/// Abramowitz–Stegun 7.1.26 is too coarse here, so the normal CDF for the
/// printed lognormal form comes from quadrature of the density.
pub fn normal_cdf(x: f64) -> f64 {
    let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
    if x < 0.0 {
        integrate_to(phi, -x, f64::INFINITY)
    } else {
        1.0 - integrate_to(phi, x, f64::INFINITY)
    }
}

pub fn normal_inv(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// GPD CDF from the definition, `1 - (1 + xi z/sigma)^(-1/xi)`, evaluated
/// as `-expm1(-ln1p(xi z/sigma)/xi)` so small values keep their digits.
pub fn gpd_cdf(xi: f64, sigma: f64, z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if xi == 0.0 {
        return -(-z / sigma).exp_m1();
    }
    let t = xi * z / sigma;
    if t <= -1.0 {
        return 1.0;
    }
    -(-t.ln_1p() / xi).exp_m1()
}

/// Anderson–Darling in the textbook paired form
/// `-n - (1/n) sum_{i=1}^n (2i-1) [ln U_(i) + ln(1 - U_(n+1-i))]`.
pub fn ad_direct(sorted_u: &[f64]) -> f64 {
    let n = sorted_u.len();
    let clamp = |u: f64| u.clamp(1e-12, 1.0 - 1e-12);
    let mut s = 0.0;
    for i in 1..=n {
        let lo = clamp(sorted_u[i - 1]);
        let hi = clamp(sorted_u[n - i]);
        s += (2 * i - 1) as f64 * (lo.ln() + (1.0 - hi).ln());
    }
    -(n as f64) - s / n as f64
}

/// ForwardStop by scanning every `k` and recomputing the mean from scratch.
pub fn forward_stop_brute(p: &[f64], gamma: f64) -> Option<usize> {
    let mut best = None;
    for k in 1..=p.len() {
        let mean = p[..k]
            .iter()
            .map(|&x| -(1.0 - x.clamp(0.001, 0.999)).ln())
            .sum::<f64>()
            / k as f64;
        if mean <= gamma {
            best = Some(k);
        }
    }
    best
}

/// Extrapolates a central difference `d(h)` (even in `h`) to `h = 0` with a
/// Neville tableau in `h^2`, shrinking `h` from `h0`; returns the entry with
/// the smallest error estimate.
pub fn richardson(d: impl Fn(f64) -> f64, h0: f64) -> f64 {
    const SHRINK: f64 = 1.4;
    const LEVELS: usize = 12;
    let c2 = SHRINK * SHRINK;
    let mut a = [[0.0f64; LEVELS]; LEVELS];
    let mut h = h0;
    a[0][0] = d(h);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..LEVELS {
        h /= SHRINK;
        a[0][i] = d(h);
        let mut fac = c2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= c2;
            let e = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
        if i > 3 && (a[i][i] - a[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    best
}

/// Deterministic split-mix generator so oracles do not share the library RNG.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
