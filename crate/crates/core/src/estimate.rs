use std::fmt;

use serde::Serialize;

use crate::confidence::ConfidenceInterval;
use crate::gpd_mle::GpdFit;

/// How a CVaR estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    /// Sample average above the empirical quantile.
    #[serde(rename = "SA")]
    Sa,
    /// GPD tail fit above an automatically selected threshold.
    #[serde(rename = "EVT")]
    Evt,
    /// The EVT pipeline could not run, so the sample average was returned.
    #[serde(rename = "EVT_FALLBACK_SA")]
    EvtFallbackSa,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sa => "SA",
            Method::Evt => "EVT",
            Method::EvtFallbackSa => "EVT_FALLBACK_SA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvarEstimate {
    pub value: f64,
    pub method: Method,
    pub alpha: f64,
    /// Threshold `u` of the GPD tail model (EVT only).
    pub threshold: Option<f64>,
    pub fit: Option<GpdFit>,
    /// The VaR estimate the CVaR was built on.
    pub quantile: f64,
    pub ci: Option<ConfidenceInterval>,
}

impl CvarEstimate {
    pub fn with_ci(mut self, ci: ConfidenceInterval) -> Self {
        self.ci = Some(ci);
        self
    }
}
