//! Risk-averse multi-armed bandit with an epsilon-greedy policy over per-arm
//! CVaR estimates. Costs are minimized, so the greedy arm is the one with the
//! smallest estimated CVaR.

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::empirical::{sample_cvar, Sample};
use crate::error::{Error, Result};
use crate::estimate::CvarEstimate;
use crate::evt_estimator::estimate_evt_cvar;
use crate::rng::{RngStream, SLOTS_PER_RUN};
use crate::threshold_select::ThresholdConfig;

/// Stream slot of the policy's own randomness; arm `j` uses slot `j + 1`.
const POLICY_SLOT: u64 = 0;

/// How an arm's CVaR is estimated from its observed costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "SA")]
    Sa,
    #[serde(rename = "EVT")]
    Evt,
    /// Every arm reports its exact CVaR from the start. A reference policy,
    /// not a learner.
    #[serde(rename = "ORACLE")]
    Oracle,
}

#[derive(Debug, Clone)]
pub struct BanditEnv {
    arms: Vec<Distribution>,
    horizon: usize,
    alpha: f64,
    exact_cvar: Vec<f64>,
    best_arm: usize,
}

impl BanditEnv {
    pub fn new(arms: Vec<Distribution>, horizon: usize, alpha: f64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidParameter("a bandit needs at least one arm".into()));
        }
        if arms.len() as u64 >= SLOTS_PER_RUN {
            return Err(Error::InvalidParameter(format!("too many arms: {}", arms.len())));
        }
        let exact_cvar = arms
            .iter()
            .map(|d| d.cvar_exact(alpha))
            .collect::<Result<Vec<_>>>()?;
        let best_arm = argmin(&exact_cvar);
        Ok(Self {
            arms,
            horizon,
            alpha,
            exact_cvar,
            best_arm,
        })
    }

    pub fn arms(&self) -> &[Distribution] {
        &self.arms
    }

    pub fn k(&self) -> usize {
        self.arms.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn exact_cvar(&self) -> &[f64] {
        &self.exact_cvar
    }

    /// Arm with the smallest exact CVaR (lowest index on ties).
    pub fn best_arm(&self) -> usize {
        self.best_arm
    }
}

/// Piecewise-constant exploration rate: segment `(until, eps)` applies to
/// stages up to and including `until`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    segments: Vec<(usize, f64)>,
}

impl Schedule {
    pub fn new(segments: Vec<(usize, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter("schedule has no segments".into()));
        }
        let mut prev = 0;
        for &(until, eps) in &segments {
            if until <= prev {
                return Err(Error::InvalidParameter(format!(
                    "schedule stages must increase, got {until} after {prev}"
                )));
            }
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::InvalidParameter(format!("epsilon {eps} outside [0, 1]")));
            }
            prev = until;
        }
        Ok(Self { segments })
    }

    /// Pure exploration for the first 1000 stages, then `eps = 0.1`.
    pub fn standard(horizon: usize) -> Self {
        let segments = if horizon <= 1000 {
            vec![(horizon.max(1), 1.0)]
        } else {
            vec![(1000, 1.0), (horizon, 0.1)]
        };
        Self { segments }
    }

    pub fn constant(horizon: usize, eps: f64) -> Result<Self> {
        Self::new(vec![(horizon.max(1), eps)])
    }

    pub fn segments(&self) -> &[(usize, f64)] {
        &self.segments
    }

    /// Last stage covered.
    pub fn end(&self) -> usize {
        self.segments.last().map_or(0, |s| s.0)
    }

    /// `eps_t` for stage `t >= 1`, or `None` past the end.
    pub fn epsilon(&self, t: usize) -> Option<f64> {
        self.segments.iter().find(|s| t <= s.0).map(|s| s.1)
    }
}

#[derive(Debug, Clone)]
pub struct ArmState {
    pub index: usize,
    pub sample: Sample,
    /// Latest estimate; `None` until the arm is first pulled.
    pub estimate: Option<CvarEstimate>,
    value: f64,
}

impl ArmState {
    fn new(index: usize, initial: f64) -> Self {
        Self {
            index,
            sample: Sample::new(),
            estimate: None,
            value: initial,
        }
    }

    pub fn pulls(&self) -> usize {
        self.sample.len()
    }

    /// Value the policy sees.
    pub fn value(&self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullRecord {
    pub t: usize,
    pub arm: usize,
    pub cost: f64,
    pub exploratory: bool,
    pub best_arm: bool,
}

/// Lowest index attaining the minimum.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Epsilon-greedy selection probabilities: the greedy arm gets
/// `1 - eps + eps/k`, every other arm `eps/k`.
pub fn policy_probabilities(estimates: &[f64], epsilon: f64) -> Vec<f64> {
    let k = estimates.len();
    if k == 0 {
        return Vec::new();
    }
    let share = epsilon / k as f64;
    let mut p = vec![share; k];
    p[argmin(estimates)] += 1.0 - epsilon;
    p
}

/// One bandit run: arm states plus the random streams it owns.
#[derive(Debug, Clone)]
pub struct Episode<'a> {
    env: &'a BanditEnv,
    kind: EstimatorKind,
    threshold: ThresholdConfig,
    states: Vec<ArmState>,
    policy_rng: RngStream,
    arm_rngs: Vec<RngStream>,
    values: Vec<f64>,
}

impl<'a> Episode<'a> {
    /// Streams are keyed by `(seed, run, slot)`, so the same run index sees the
    /// same costs under every estimator kind.
    pub fn new(env: &'a BanditEnv, kind: EstimatorKind, threshold: ThresholdConfig, seed: u64, run: u64) -> Self {
        let states: Vec<ArmState> = (0..env.k())
            .map(|j| {
                let initial = match kind {
                    EstimatorKind::Oracle => env.exact_cvar[j],
                    _ => 0.0,
                };
                ArmState::new(j, initial)
            })
            .collect();
        Self {
            env,
            kind,
            threshold,
            values: states.iter().map(ArmState::value).collect(),
            states,
            policy_rng: RngStream::for_run(seed, run, POLICY_SLOT),
            arm_rngs: (0..env.k())
                .map(|j| RngStream::for_run(seed, run, j as u64 + 1))
                .collect(),
        }
    }

    pub fn states(&self) -> &[ArmState] {
        &self.states
    }

    /// Stage `t`: choose an arm, observe its cost and refresh only that arm's
    /// estimate.
    pub fn step(&mut self, schedule: &Schedule, t: usize) -> Result<PullRecord> {
        let eps = schedule
            .epsilon(t)
            .ok_or_else(|| Error::InvalidParameter(format!("schedule ends before stage {t}")))?;
        let k = self.env.k();
        let exploratory = self.policy_rng.uniform() < eps;
        let arm = if exploratory {
            self.policy_rng.index(k)
        } else {
            argmin(&self.values)
        };
        let cost = self.env.arms[arm].sample(&mut self.arm_rngs[arm]);
        let state = &mut self.states[arm];
        state.sample.push(cost);
        let alpha = self.env.alpha;
        match self.kind {
            EstimatorKind::Sa => {
                let e = sample_cvar(&state.sample, alpha)?;
                state.value = e.value;
                state.estimate = Some(e);
            }
            EstimatorKind::Evt => {
                let e = estimate_evt_cvar(&state.sample, alpha, &self.threshold)?;
                state.value = e.value;
                state.estimate = Some(e);
            }
            EstimatorKind::Oracle => {}
        }
        self.values[arm] = state.value;
        Ok(PullRecord {
            t,
            arm,
            cost,
            exploratory,
            best_arm: arm == self.env.best_arm,
        })
    }
}

/// Runs stages `1..=horizon` of run `run` under `seed`.
pub fn run_episode(
    env: &BanditEnv,
    schedule: &Schedule,
    kind: EstimatorKind,
    threshold: ThresholdConfig,
    seed: u64,
    run: u64,
) -> Result<Vec<PullRecord>> {
    if env.horizon > 0 && schedule.end() < env.horizon {
        return Err(Error::InvalidParameter(format!(
            "schedule covers {} stages but the horizon is {}",
            schedule.end(),
            env.horizon
        )));
    }
    let mut ep = Episode::new(env, kind, threshold, seed, run);
    (1..=env.horizon).map(|t| ep.step(schedule, t)).collect()
}
