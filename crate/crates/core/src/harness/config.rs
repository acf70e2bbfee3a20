use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    #[default]
    WalkCurve,
    TrotterScan,
    Spectrum,
    Scattering,
    Hitting,
    ClassicalTraversal,
    LowerboundMc,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::WalkCurve,
        ExperimentKind::TrotterScan,
        ExperimentKind::Spectrum,
        ExperimentKind::Scattering,
        ExperimentKind::Hitting,
        ExperimentKind::ClassicalTraversal,
        ExperimentKind::LowerboundMc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::WalkCurve => "walk-curve",
            ExperimentKind::TrotterScan => "trotter-scan",
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Scattering => "scattering",
            ExperimentKind::Hitting => "hitting",
            ExperimentKind::ClassicalTraversal => "classical-traversal",
            ExperimentKind::LowerboundMc => "lowerbound-mc",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "experiment",
                value: s.to_string(),
            })
    }
}

/// Which averaging time the hitting experiment uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauRule {
    /// `4n / (epsilon * gap)` with the measured gap.
    #[default]
    Lemma,
    /// `n^4 / (2 epsilon)`.
    Theorem,
}

/// Everything a run depends on. Fields a kind does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Option<u32>,
    /// Inclusive `[low, high]`.
    pub n_range: Option<[u32; 2]>,
    pub gamma: f64,
    pub epsilon: f64,
    pub tau_rule: TauRule,
    pub trials: u64,
    pub seed: u64,
    pub budget: Option<u64>,
    /// Final time (walk-curve, trotter-scan).
    pub time: Option<f64>,
    pub time_step: Option<f64>,
    /// Trotter step counts.
    pub steps: Vec<u64>,
    /// Defect ratio for scattering.
    pub alpha: f64,
    /// Packet carrier momentum.
    pub momentum: f64,
    pub tolerance: Option<f64>,
    /// Output path stem; `.json` and `.csv` are appended.
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::default(),
            n: None,
            n_range: None,
            gamma: FRAC_1_SQRT_2,
            epsilon: 0.5,
            tau_rule: TauRule::default(),
            trials: 1000,
            seed: 0,
            budget: None,
            time: None,
            time_step: None,
            steps: Vec::new(),
            alpha: SQRT_2,
            momentum: FRAC_PI_2,
            tolerance: None,
            out: None,
        }
    }
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidExperiment(format!("field `{name}`: {msg}"))
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidExperiment(e.message().to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidExperiment(e.to_string()))
    }

    /// The `n` values of the run: `n`, else `n_range`, else `default`.
    pub fn ns(&self, default: [u32; 2]) -> Vec<u32> {
        match (self.n, self.n_range) {
            (Some(n), _) => vec![n],
            (None, Some([a, b])) => (a..=b).collect(),
            (None, None) => (default[0]..=default[1]).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some([a, b]) = self.n_range {
            if a == 0 || a > b {
                return Err(field(
                    "n_range",
                    format!("[{a}, {b}] is not an increasing range of positive depths"),
                ));
            }
        }
        if self.n == Some(0) {
            return Err(field("n", "must be at least 1"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(field("gamma", "must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(field("epsilon", "must lie in (0, 1)"));
        }
        if self.tolerance.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return Err(field("tolerance", "must be positive"));
        }
        if self.time.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            return Err(field("time", "must be finite and nonnegative"));
        }
        if self.time_step.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return Err(field("time_step", "must be positive"));
        }
        let max_n = self.ns([1, 1]).into_iter().max().unwrap_or(1);
        match self.kind {
            ExperimentKind::WalkCurve if self.n.is_none() => {
                return Err(field("n", "required for this experiment"));
            }
            ExperimentKind::Spectrum if self.n.is_none() && self.n_range.is_none() => {
                return Err(field("n", "required for this experiment (or `n_range`)"));
            }
            ExperimentKind::TrotterScan => {
                if max_n > 3 {
                    return Err(field("n", "the gate-level scan supports n <= 3"));
                }
                if self.steps.iter().any(|&j| j == 0) {
                    return Err(field("steps", "every step count must be at least 1"));
                }
            }
            ExperimentKind::Spectrum if max_n > 2000 => return Err(field("n", "above 2000")),
            ExperimentKind::Scattering => {
                if !(self.alpha.is_finite() && self.alpha > 0.0) {
                    return Err(field("alpha", "must be positive"));
                }
                if !(self.momentum > 0.0 && self.momentum < std::f64::consts::PI) {
                    return Err(field("momentum", "must lie in (0, pi)"));
                }
            }
            ExperimentKind::ClassicalTraversal if max_n > 22 => {
                return Err(field("n_range", "traversal graphs above n = 22"))
            }
            ExperimentKind::LowerboundMc => {
                if self.trials < 100 {
                    return Err(field(
                        "trials",
                        "at least 100 trials are needed for an interval",
                    ));
                }
                if max_n > 30 {
                    return Err(field("n", "above 30"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
