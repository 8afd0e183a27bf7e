//! Monte-Carlo studies comparing the SA and EVT estimators: a single-arm
//! estimation study scored by RMSE and Fraction Closer, and a k-armed bandit
//! testbed scored by Percent Best Action.
//!
//! Runs are spread over a fixed-size worker pool. Each run owns its random
//! streams and results are reduced in run order, so the output does not
//! depend on the number of workers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::{run_episode, BanditEnv, EstimatorKind, Schedule};
use crate::distributions::Distribution;
use crate::empirical::{sample_cvar, Sample};
use crate::error::{Error, Result};
use crate::evt_estimator::estimate_evt_cvar;
use crate::rng::RngStream;
use crate::threshold_select::ThresholdConfig;

/// Current config schema version.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SingleArm,
    Bandit,
}

/// Which stages get metrics: every stage up to `dense_until`, then every
/// `every`-th stage, and always the last one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stride {
    pub dense_until: usize,
    pub every: usize,
}

impl Default for Stride {
    fn default() -> Self {
        Self {
            dense_until: 100,
            every: 10,
        }
    }
}

impl Stride {
    pub fn every_stage() -> Self {
        Self {
            dense_until: 0,
            every: 1,
        }
    }

    pub fn records(&self, t: usize, n: usize) -> bool {
        t <= self.dense_until || t.is_multiple_of(self.every) || t == n
    }

    pub fn stages(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&t| self.records(t, n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub kind: ExperimentKind,
    /// Cost distribution of the single-arm study.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Distribution>,
    /// Arms of the bandit testbed.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub arms: Vec<Distribution>,
    pub alpha: f64,
    pub runs: usize,
    pub stages: usize,
    pub candidates: usize,
    pub gamma: f64,
    /// Bandit exploration schedule; the standard one when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    pub seed: u64,
    /// Worker threads; all available cores when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub stride: Stride,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            kind: ExperimentKind::SingleArm,
            distribution: None,
            arms: Vec::new(),
            alpha: 0.999,
            runs: 1000,
            stages: 5000,
            candidates: 50,
            gamma: 0.1,
            schedule: None,
            seed: 0,
            workers: None,
            stride: Stride::default(),
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn single_arm(distribution: Distribution) -> Self {
        Self {
            kind: ExperimentKind::SingleArm,
            distribution: Some(distribution),
            ..Self::default()
        }
    }

    pub fn bandit(arms: Vec<Distribution>) -> Self {
        Self {
            kind: ExperimentKind::Bandit,
            arms,
            ..Self::default()
        }
    }

    pub fn threshold_config(&self) -> ThresholdConfig {
        ThresholdConfig {
            candidates: self.candidates,
            gamma: self.gamma,
        }
    }

    pub fn effective_schedule(&self) -> Schedule {
        self.schedule.clone().unwrap_or_else(|| Schedule::standard(self.stages))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {} (expected {CONFIG_VERSION})", self.version));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must be in (0, 1), got {}", self.alpha));
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.candidates < 2 {
            return bad(format!("candidates must be at least 2, got {}", self.candidates));
        }
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.stride.every == 0 {
            return bad("stride.every must be at least 1".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        match self.kind {
            ExperimentKind::SingleArm => match &self.distribution {
                None => return bad("single_arm experiment needs a distribution".into()),
                Some(d) => d.validate().map_err(|e| Error::Config(e.to_string()))?,
            },
            ExperimentKind::Bandit => {
                if self.arms.is_empty() {
                    return bad("bandit experiment needs at least one arm".into());
                }
                for d in &self.arms {
                    d.validate().map_err(|e| Error::Config(e.to_string()))?;
                }
                let s = self.effective_schedule();
                // Deserialized schedules skip the constructor's checks.
                Schedule::new(s.segments().to_vec()).map_err(|e| Error::Config(e.to_string()))?;
                if self.stages > 0 && s.end() < self.stages {
                    return bad(format!("schedule covers {} stages, need {}", s.end(), self.stages));
                }
            }
        }
        Ok(())
    }
}

/// Callback after each completed run: `(runs_done, runs_total)`.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

/// One row of the single-arm study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleArmRow {
    pub t: usize,
    pub rmse_sa: f64,
    pub rmse_evt: f64,
    pub fraction_closer: f64,
}

/// One row of the bandit testbed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BanditRow {
    pub t: usize,
    pub pct_best_sa: f64,
    pub pct_best_evt: f64,
}

/// CSV layout of a metric row.
pub trait MetricRow: Serialize {
    const HEADER: &'static [&'static str];
}

impl MetricRow for SingleArmRow {
    const HEADER: &'static [&'static str] = &["t", "rmse_sa", "rmse_evt", "fraction_closer"];
}

impl MetricRow for BanditRow {
    const HEADER: &'static [&'static str] = &["t", "pct_best_sa", "pct_best_evt"];
}

/// `sqrt(mean((x - truth)^2))`.
pub fn compute_rmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let ss: f64 = estimates.iter().map(|&x| (x - truth) * (x - truth)).sum();
    Ok((ss / estimates.len() as f64).sqrt())
}

/// Share of runs where the EVT estimate is strictly closer to the truth than
/// the SA estimate.
pub fn compute_fraction_closer(evt: &[f64], sa: &[f64], truth: f64) -> Result<f64> {
    if evt.len() != sa.len() {
        return Err(Error::LengthMismatch {
            left: evt.len(),
            right: sa.len(),
        });
    }
    if evt.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let closer = evt
        .iter()
        .zip(sa)
        .filter(|&(&e, &s)| (e - truth).abs() < (s - truth).abs())
        .count();
    Ok(closer as f64 / evt.len() as f64)
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Maps `f` over `0..runs` on the pool, returning results in run order.
fn par_runs<T, F>(config: &ExperimentConfig, progress: Option<Progress<'_>>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let done = AtomicUsize::new(0);
    let runs = config.runs;
    pool(config.workers)?.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|m| {
                let r = f(m);
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(p) = progress {
                    p(d, runs);
                }
                r
            })
            .collect()
    })
}

/// Single-arm study with the SA and EVT estimators.
pub fn run_single_arm(config: &ExperimentConfig, progress: Option<Progress<'_>>) -> Result<Vec<SingleArmRow>> {
    let threshold = config.threshold_config();
    let alpha = config.alpha;
    run_single_arm_with(config, progress, |s| {
        Ok((
            sample_cvar(s, alpha)?.value,
            estimate_evt_cvar(s, alpha, &threshold)?.value,
        ))
    })
}

/// Single-arm study with caller-supplied estimators. `estimators` maps the
/// first `t` costs of a run to `(sa, evt)` estimates.
pub fn run_single_arm_with<F>(
    config: &ExperimentConfig,
    progress: Option<Progress<'_>>,
    estimators: F,
) -> Result<Vec<SingleArmRow>>
where
    F: Fn(&Sample) -> Result<(f64, f64)> + Sync,
{
    config.validate()?;
    if config.kind != ExperimentKind::SingleArm {
        return Err(Error::Config("not a single_arm config".into()));
    }
    let dist = config.distribution.expect("validated");
    let truth = dist.cvar_exact(config.alpha)?;
    let n = config.stages;
    let stages = config.stride.stages(n);

    let per_run: Vec<Vec<(f64, f64)>> = par_runs(config, progress, |m| {
        let mut rng = RngStream::for_run(config.seed, m, 0);
        let mut sample = Sample::new();
        let mut out = Vec::with_capacity(stages.len());
        for t in 1..=n {
            sample.push(dist.sample(&mut rng));
            if config.stride.records(t, n) {
                out.push(estimators(&sample)?);
            }
        }
        Ok(out)
    })?;

    let mut rows = Vec::with_capacity(stages.len());
    let mut sa = vec![0.0; per_run.len()];
    let mut evt = vec![0.0; per_run.len()];
    for (i, &t) in stages.iter().enumerate() {
        for (m, run) in per_run.iter().enumerate() {
            (sa[m], evt[m]) = run[i];
        }
        rows.push(SingleArmRow {
            t,
            rmse_sa: compute_rmse(&sa, truth)?,
            rmse_evt: compute_rmse(&evt, truth)?,
            fraction_closer: compute_fraction_closer(&evt, &sa, truth)?,
        });
    }
    Ok(rows)
}

/// Percent Best Action per stage for one estimator kind: entry `t-1` is the
/// share of runs whose stage-`t` pull hit the best arm.
pub fn pct_best_action(
    config: &ExperimentConfig,
    kind: EstimatorKind,
    progress: Option<Progress<'_>>,
) -> Result<Vec<f64>> {
    config.validate()?;
    if config.kind != ExperimentKind::Bandit {
        return Err(Error::Config("not a bandit config".into()));
    }
    let env = BanditEnv::new(config.arms.clone(), config.stages, config.alpha)?;
    let schedule = config.effective_schedule();
    let threshold = config.threshold_config();
    let hits: Vec<Vec<bool>> = par_runs(config, progress, |m| {
        let recs = run_episode(&env, &schedule, kind, threshold, config.seed, m)?;
        Ok(recs.iter().map(|r| r.best_arm).collect())
    })?;
    let mut counts = vec![0usize; config.stages];
    for run in &hits {
        for (c, &h) in counts.iter_mut().zip(run) {
            *c += usize::from(h);
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 / config.runs as f64).collect())
}

/// Bandit testbed with both estimators; one row per stage. Both methods see
/// the same per-run cost streams.
pub fn run_bandit_testbed(config: &ExperimentConfig, progress: Option<Progress<'_>>) -> Result<Vec<BanditRow>> {
    let sa = pct_best_action(config, EstimatorKind::Sa, progress)?;
    let evt = pct_best_action(config, EstimatorKind::Evt, progress)?;
    Ok(sa
        .into_iter()
        .zip(evt)
        .enumerate()
        .map(|(i, (s, e))| BanditRow {
            t: i + 1,
            pct_best_sa: s,
            pct_best_evt: e,
        })
        .collect())
}

/// Writes a header and one line per row.
pub fn write_metrics<R: MetricRow, W: Write>(rows: &[R], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_metrics`] to a file, with the path in any error.
pub fn write_metrics_csv<R: MetricRow>(rows: &[R], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_metrics(rows, std::io::BufWriter::new(file)).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}
