//! Automated threshold selection for the peaks-over-threshold model.
//!
//! Candidate thresholds are empirical quantiles at equally spaced levels from
//! 0.7 up to the CVaR level. Each candidate gets a GPD fit to its excesses and
//! an Anderson–Darling goodness-of-fit p-value; candidates whose fitted shape
//! exceeds [`XI_DISCARD`] are dropped before testing. The ForwardStop rule then
//! picks the first threshold after the last rejected one.

mod ad_table;

use std::io::Write;

use serde::Serialize;

use crate::distributions::gpd_cdf_unchecked;
use crate::empirical::{check_level, naive_quantile, Sample};
use crate::error::{Error, Result};
use crate::gpd_mle::{fit_gpd_with_start, GpdFit, MIN_EXCESSES};

pub use ad_table::{AD_UPPER_TAIL_LEVELS, AD_XI_GRID};

/// Lowest quantile level of the candidate grid.
pub const LOWEST_LEVEL: f64 = 0.7;

/// Candidates whose fitted shape exceeds this are discarded.
pub const XI_DISCARD: f64 = 0.9;

/// Range p-values are clamped to.
pub const P_MIN: f64 = 0.001;
pub const P_MAX: f64 = 0.999;

const U_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdConfig {
    /// Number of candidate thresholds `l`.
    pub candidates: usize,
    /// ForwardStop level `gamma`.
    pub gamma: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            candidates: 50,
            gamma: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    TooFewExcesses,
    NotConverged,
    ShapeAboveLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCandidate {
    pub quantile_level: f64,
    pub u: f64,
    pub n_excesses: usize,
    pub fit: Option<GpdFit>,
    pub discarded: Option<DiscardReason>,
    pub ad_stat: Option<f64>,
    pub p_value: Option<f64>,
}

impl ThresholdCandidate {
    pub fn survived(&self) -> bool {
        self.discarded.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSelection {
    /// Every grid candidate in increasing threshold order, discarded ones
    /// included.
    pub candidates: Vec<ThresholdCandidate>,
    /// Indices into `candidates` of the survivors, i.e. the ordered tests.
    pub survivors: Vec<usize>,
    /// ForwardStop cutoff over the survivors (1-based), if any test rejected.
    pub k_hat: Option<usize>,
    /// Index into `candidates` of the chosen threshold.
    pub chosen_index: usize,
    /// Set when every surviving test rejected and the highest survivor was
    /// taken by default.
    pub low_confidence: bool,
}

impl ThresholdSelection {
    pub fn chosen(&self) -> &ThresholdCandidate {
        &self.candidates[self.chosen_index]
    }

    /// The chosen fit; always present on a successful selection.
    pub fn chosen_fit(&self) -> &GpdFit {
        self.chosen()
            .fit
            .as_ref()
            .expect("chosen candidate always carries a fit")
    }

    /// One CSV row per candidate:
    /// `quantile_level,u,n_excesses,xi_hat,sigma_hat,ad_stat,p_value,discarded_flag,chosen_flag`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "quantile_level",
            "u",
            "n_excesses",
            "xi_hat",
            "sigma_hat",
            "ad_stat",
            "p_value",
            "discarded_flag",
            "chosen_flag",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (i, c) in self.candidates.iter().enumerate() {
            w.write_record([
                c.quantile_level.to_string(),
                c.u.to_string(),
                c.n_excesses.to_string(),
                opt(c.fit.map(|f| f.xi_hat)),
                opt(c.fit.map(|f| f.sigma_hat)),
                opt(c.ad_stat),
                opt(c.p_value),
                u8::from(c.discarded.is_some()).to_string(),
                u8::from(i == self.chosen_index).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Quantile levels `0.7 = a_1 < ... < a_l = alpha`, equally spaced with both
/// endpoints attained.
pub fn candidate_levels(alpha: f64, l: usize) -> Result<Vec<f64>> {
    check_level(alpha)?;
    if alpha <= LOWEST_LEVEL {
        return Err(Error::Domain(format!(
            "alpha must exceed the lowest candidate level {LOWEST_LEVEL}, got {alpha}"
        )));
    }
    if l < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 candidates, got {l}")));
    }
    let step = (alpha - LOWEST_LEVEL) / (l - 1) as f64;
    Ok((0..l)
        .map(|j| if j + 1 == l { alpha } else { LOWEST_LEVEL + step * j as f64 })
        .collect())
}

/// Candidate thresholds as `(level, u)` pairs, where `u` is the empirical
/// quantile at `level`. Repeated thresholds (from ties) keep their first
/// level only.
pub fn candidate_grid(sample: &Sample, alpha: f64, l: usize) -> Result<Vec<(f64, f64)>> {
    let levels = candidate_levels(alpha, l)?;
    if sample.is_empty() {
        return Err(Error::InsufficientData {
            needed: MIN_EXCESSES,
            got: 0,
        });
    }
    let u1 = naive_quantile(sample, LOWEST_LEVEL)?;
    let above = excess_start(sample.sorted(), u1);
    let n_above = sample.len() - above;
    if n_above < MIN_EXCESSES {
        return Err(Error::InsufficientData {
            needed: MIN_EXCESSES,
            got: n_above,
        });
    }
    let mut grid: Vec<(f64, f64)> = Vec::with_capacity(l);
    for a in levels {
        let u = naive_quantile(sample, a)?;
        if grid.last().is_none_or(|&(_, prev)| u > prev) {
            grid.push((a, u));
        }
    }
    Ok(grid)
}

/// Position of the first observation strictly above `u` in a sorted slice.
fn excess_start(sorted: &[f64], u: f64) -> usize {
    sorted.partition_point(|&v| v <= u)
}

/// Anderson–Darling statistic of sorted excesses against a fitted GPD:
///
/// ```text
/// A^2 = -n - (1/n) sum_j (2j-1) [ln U_(j) + ln(1 - U_(n+1-j))],  U = G(z)
/// ```
///
/// with `U` clamped to `[1e-12, 1 - 1e-12]`.
pub fn ad_statistic(sorted_excesses: &[f64], fit: &GpdFit) -> Result<f64> {
    if sorted_excesses.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let (xi, sigma) = (fit.xi_hat, fit.sigma_hat);
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    Ok(ad_from_transform(sorted_excesses.len(), |j| {
        gpd_cdf_unchecked(xi, sigma, sorted_excesses[j])
    }))
}

/// Anderson–Darling statistic from already transformed, sorted uniforms.
pub fn ad_from_uniforms(sorted_u: &[f64]) -> Result<f64> {
    if sorted_u.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(ad_from_transform(sorted_u.len(), |j| sorted_u[j]))
}

// Rearranged to a single pass: term j contributes (2j-1) ln U_j and
// (2(n-j)+1) ln(1-U_j).
fn ad_from_transform(n: usize, mut u_at: impl FnMut(usize) -> f64) -> f64 {
    let nf = n as f64;
    let mut s = 0.0;
    for j in 0..n {
        let u = u_at(j).clamp(U_CLAMP, 1.0 - U_CLAMP);
        let lo = (2 * j + 1) as f64;
        let hi = (2 * (n - j) - 1) as f64;
        s += lo * u.ln() + hi * (-u).ln_1p();
    }
    -nf - s / nf
}

/// Upper-tail p-value of `A^2` for a GPD with estimated parameters, read off
/// the critical-value table: linear in the shape between table rows,
/// log-linear in the p-level between critical values, clamped to
/// `[P_MIN, P_MAX]`.
pub fn ad_pvalue(ad_stat: f64, xi_hat: f64) -> f64 {
    if ad_stat.is_nan() || ad_stat == f64::INFINITY {
        return P_MIN;
    }
    let crit = ad_table::critical_values_at(xi_hat);
    let levels = &AD_UPPER_TAIL_LEVELS;
    let last = levels.len() - 1;
    let seg = if ad_stat <= crit[0] {
        0
    } else if ad_stat >= crit[last] {
        return P_MIN;
    } else {
        crit.partition_point(|&c| c < ad_stat) - 1
    };
    let (c0, c1) = (crit[seg], crit[seg + 1]);
    let (l0, l1) = (levels[seg].ln(), levels[seg + 1].ln());
    let lp = l0 + (ad_stat - c0) * (l1 - l0) / (c1 - c0);
    lp.exp().clamp(P_MIN, P_MAX)
}

/// ForwardStop cutoff `max{k : -(1/k) sum_{i<=k} ln(1 - p_i) <= gamma}`
/// (1-based), or `None` when no `k` qualifies. P-values are clamped to
/// `[P_MIN, P_MAX]` first.
pub fn forward_stop(p_values: &[f64], gamma: f64) -> Option<usize> {
    let mut acc = 0.0;
    let mut best = None;
    for (i, &p) in p_values.iter().enumerate() {
        acc -= (-p.clamp(P_MIN, P_MAX)).ln_1p();
        if acc / (i + 1) as f64 <= gamma {
            best = Some(i + 1);
        }
    }
    best
}

/// Full selection: grid, fits, discards, p-values and ForwardStop.
pub fn select_threshold(sample: &Sample, alpha: f64, config: &ThresholdConfig) -> Result<ThresholdSelection> {
    if !(config.gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", config.gamma)));
    }
    let grid = candidate_grid(sample, alpha, config.candidates)?;
    let sorted = sample.sorted();

    let mut candidates = Vec::with_capacity(grid.len());
    let mut survivors = Vec::new();
    let mut warm: Option<(f64, f64, f64)> = None; // (u, xi, sigma) of the last good fit
    let mut excesses = Vec::new();
    for (level, u) in grid {
        excesses.clear();
        excesses.extend(sorted[excess_start(sorted, u)..].iter().map(|&y| y - u));
        let mut cand = ThresholdCandidate {
            quantile_level: level,
            u,
            n_excesses: excesses.len(),
            fit: None,
            discarded: None,
            ad_stat: None,
            p_value: None,
        };
        if excesses.len() < MIN_EXCESSES {
            cand.discarded = Some(DiscardReason::TooFewExcesses);
            candidates.push(cand);
            continue;
        }
        // Excesses of a GPD over a higher threshold are GPD with the same shape
        // and scale sigma + xi*(u - u_prev).
        let start = warm.and_then(|(u0, xi, sigma)| {
            let s = sigma + xi * (u - u0);
            (s > 0.0).then_some((xi, s))
        });
        let fit = fit_gpd_with_start(&excesses, start)?;
        cand.fit = Some(fit);
        if !fit.converged {
            cand.discarded = Some(DiscardReason::NotConverged);
        } else {
            warm = Some((u, fit.xi_hat, fit.sigma_hat));
            if fit.xi_hat > XI_DISCARD {
                cand.discarded = Some(DiscardReason::ShapeAboveLimit);
            } else {
                let a2 = ad_statistic(&excesses, &fit)?;
                cand.ad_stat = Some(a2);
                cand.p_value = Some(ad_pvalue(a2, fit.xi_hat));
                survivors.push(candidates.len());
            }
        }
        candidates.push(cand);
    }

    if survivors.is_empty() {
        return Err(Error::SelectionFailed(format!(
            "all {} candidate thresholds were discarded",
            candidates.len()
        )));
    }
    let p: Vec<f64> = survivors
        .iter()
        .map(|&i| candidates[i].p_value.expect("survivors carry p-values"))
        .collect();
    let k_hat = forward_stop(&p, config.gamma);
    let (pos, low_confidence) = match k_hat {
        None => (0, false),
        Some(k) if k < survivors.len() => (k, false),
        Some(_) => (survivors.len() - 1, true),
    };
    Ok(ThresholdSelection {
        chosen_index: survivors[pos],
        candidates,
        survivors,
        k_hat,
        low_confidence,
    })
}
