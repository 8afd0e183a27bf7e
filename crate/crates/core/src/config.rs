//! Experiment configs as versioned JSON documents, and the named presets.
//!
//! A config file only needs the fields it changes; everything else takes the
//! defaults of [`ExperimentConfig`]. A minimal single-arm file:
//!
//! ```json
//! {
//!   "version": 1,
//!   "kind": "single_arm",
//!   "distribution": {"family": "gpd", "params": {"xi": 0.8, "sigma": 1.0}}
//! }
//! ```

use std::path::Path;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::experiments::ExperimentConfig;

pub fn from_json(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn to_json(cfg: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(cfg) + "\n").map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

fn gpd(xi: f64, sigma: f64) -> Distribution {
    Distribution::Gpd { xi, sigma }
}

fn lognormal(mu: f64, sigma: f64) -> Distribution {
    Distribution::Lognormal { mu, sigma }
}

fn weibull(kappa: f64, lambda: f64) -> Distribution {
    Distribution::Weibull { kappa, lambda }
}

fn single(d: Distribution) -> ExperimentConfig {
    ExperimentConfig::single_arm(d)
}

// Each single-arm setting appears twice (RMSE and Fraction Closer panels),
// so both names map to the same experiment.
const PRESETS: &[Preset] = &[
    Preset { name: "fig1a", description: "single-arm, GPD xi=0.4 sigma=1", build: || single(gpd(0.4, 1.0)) },
    Preset { name: "fig1b", description: "single-arm, GPD xi=0.4 sigma=1", build: || single(gpd(0.4, 1.0)) },
    Preset { name: "fig1c", description: "single-arm, GPD xi=0.8 sigma=1", build: || single(gpd(0.8, 1.0)) },
    Preset { name: "fig1d", description: "single-arm, GPD xi=0.8 sigma=1", build: || single(gpd(0.8, 1.0)) },
    Preset { name: "fig2a", description: "single-arm, lognormal mu=0 sigma=0.5", build: || single(lognormal(0.0, 0.5)) },
    Preset { name: "fig2b", description: "single-arm, lognormal mu=0 sigma=0.5", build: || single(lognormal(0.0, 0.5)) },
    Preset { name: "fig2c", description: "single-arm, lognormal mu=0 sigma=0.9", build: || single(lognormal(0.0, 0.9)) },
    Preset { name: "fig2d", description: "single-arm, lognormal mu=0 sigma=0.9", build: || single(lognormal(0.0, 0.9)) },
    Preset { name: "fig3a", description: "single-arm, Weibull kappa=1.25 lambda=1", build: || single(weibull(1.25, 1.0)) },
    Preset { name: "fig3b", description: "single-arm, Weibull kappa=1.25 lambda=1", build: || single(weibull(1.25, 1.0)) },
    Preset { name: "fig3c", description: "single-arm, Weibull kappa=1.75 lambda=1", build: || single(weibull(1.75, 1.0)) },
    Preset { name: "fig3d", description: "single-arm, Weibull kappa=1.75 lambda=1", build: || single(weibull(1.75, 1.0)) },
    Preset {
        name: "fig4a",
        description: "5-armed bandit, GPD sigma=1, xi in {0.4, 0.5, 0.6, 0.7, 0.8}",
        build: || ExperimentConfig::bandit([0.4, 0.5, 0.6, 0.7, 0.8].map(|xi| gpd(xi, 1.0)).to_vec()),
    },
    Preset {
        name: "fig4b",
        description: "5-armed bandit, lognormal mu=1, sigma in {0.5, 0.6, 0.7, 0.8, 0.9}",
        build: || ExperimentConfig::bandit([0.5, 0.6, 0.7, 0.8, 0.9].map(|s| lognormal(1.0, s)).to_vec()),
    },
    Preset {
        name: "fig4c",
        description: "5-armed bandit, Weibull lambda=1, kappa in {0.75, 1.0, 1.25, 1.5, 1.75}",
        build: || ExperimentConfig::bandit([0.75, 1.0, 1.25, 1.5, 1.75].map(|k| weibull(k, 1.0)).to_vec()),
    },
];

pub fn presets() -> &'static [Preset] {
    PRESETS
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(Preset::config)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
            Error::Config(format!("unknown preset '{name}' (known: {})", names.join(", ")))
        })
}
