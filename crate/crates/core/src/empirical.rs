//! Distribution-free estimators on a finite sample: empirical CDF, the naive
//! order-statistic quantile and the sample-average CVaR.

use crate::error::{Error, Result};
use crate::estimate::{CvarEstimate, Method};

/// Observed costs, kept both in arrival order and as a sorted view.
///
/// Appending is an ordered insert so the bandit can grow an arm's sample one
/// pull at a time without re-sorting.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sample; every value must be finite.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite observation {bad}")));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    /// Appends one observation. Panics on a non-finite value.
    pub fn push(&mut self, x: f64) {
        assert!(x.is_finite(), "non-finite observation {x}");
        let at = self.sorted.partition_point(|&v| v <= x);
        self.sorted.insert(at, x);
        self.values.push(x);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observations in arrival order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `y_(1) <= ... <= y_(t)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Sample made of the first `t` observations.
    pub fn prefix(&self, t: usize) -> Sample {
        let values = self.values[..t.min(self.len())].to_vec();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Sample { values, sorted }
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::InsufficientData { needed: 1, got: 0 })
        } else {
            Ok(())
        }
    }
}

impl FromIterator<f64> for Sample {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sample::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// 1-based rank `ceil(p * t)` clamped to `[1, t]`.
///
/// Products such as `0.7 * 10` land a hair above the integer in floating
/// point; a relative slack of 1e-9 keeps those on the intended rank.
pub fn quantile_rank(p: f64, t: usize) -> usize {
    let x = p * t as f64;
    let k = (x - 1e-9 * x.abs().max(1.0)).ceil();
    (k.max(1.0) as usize).min(t)
}

/// `t^{-1} * #{y_s <= y}`.
pub fn empirical_cdf(sample: &Sample, y: f64) -> Result<f64> {
    sample.require_nonempty()?;
    let count = sample.sorted.partition_point(|&v| v <= y);
    Ok(count as f64 / sample.len() as f64)
}

/// Order statistic `y_(ceil(alpha * t))`.
pub fn naive_quantile(sample: &Sample, alpha: f64) -> Result<f64> {
    sample.require_nonempty()?;
    check_level(alpha)?;
    Ok(sample.sorted[quantile_rank(alpha, sample.len()) - 1])
}

/// Mean of all observations `>= naive_quantile(alpha)`; ties at the
/// quantile are included.
pub fn sample_cvar(sample: &Sample, alpha: f64) -> Result<CvarEstimate> {
    let q = naive_quantile(sample, alpha)?;
    let start = sample.sorted.partition_point(|&v| v < q);
    let tail = &sample.sorted[start..];
    let value = tail.iter().sum::<f64>() / tail.len() as f64;
    Ok(CvarEstimate {
        value,
        method: Method::Sa,
        alpha,
        threshold: None,
        fit: None,
        quantile: q,
        ci: None,
    })
}

/// Sample CVaR on a sorted slice; used by the bootstrap hot loop.
pub(crate) fn sorted_cvar(sorted: &[f64], alpha: f64) -> f64 {
    let q = sorted[quantile_rank(alpha, sorted.len()) - 1];
    let start = sorted.partition_point(|&v| v < q);
    let tail = &sorted[start..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

pub(crate) fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("confidence level must be in (0, 1), got {alpha}")))
    }
}
