use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::record::{Cell, Table};
use crate::line::{quantization_lhs, transmission_probability};
use crate::walk::exit_probability_curve;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    TransmissionCurve,
    ExitProbabilityCurve,
    QuantizationLhs,
}

impl FigureKind {
    pub const ALL: [FigureKind; 3] = [
        FigureKind::TransmissionCurve,
        FigureKind::ExitProbabilityCurve,
        FigureKind::QuantizationLhs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigureKind::TransmissionCurve => "transmission-curve",
            FigureKind::ExitProbabilityCurve => "exit-probability-curve",
            FigureKind::QuantizationLhs => "quantization-lhs",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "figure",
                value: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    /// Depth for the exit curve and the quantization condition.
    pub n: u32,
    pub alpha: f64,
    pub samples: usize,
    /// End of the exit curve; defaults to `4n`.
    pub time: Option<f64>,
}

impl Default for FigureParams {
    fn default() -> Self {
        FigureParams {
            n: 5,
            alpha: SQRT_2,
            samples: 1000,
            time: None,
        }
    }
}

/// Plot-ready series.
///
/// * transmission-curve: `(p, transmission)` on `(0, pi)`, with `pi/2` on
///   the grid.
/// * exit-probability-curve: `(t, probability)` from `t = 0`.
/// * quantization-lhs: `(p, lhs, pole)`. Pole rows have `pole = 1` and an
///   empty `lhs`; the sign of `lhs` may only flip across a crossing or a
///   pole row.
pub fn emit_figure_data(kind: FigureKind, params: &FigureParams) -> Result<Table> {
    if params.samples < 3 {
        return Err(Error::param("samples", "need at least 3"));
    }
    if params.n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    match kind {
        FigureKind::TransmissionCurve => {
            let mut t = Table::new(&["p", "transmission"]);
            let half = params.samples.div_ceil(2);
            for i in 1..2 * half {
                let p = if i == half {
                    PI / 2.0
                } else {
                    i as f64 * PI / (2 * half) as f64
                };
                t.push(vec![
                    p.into(),
                    transmission_probability(p, params.alpha)?.into(),
                ])?;
            }
            Ok(t)
        }
        FigureKind::ExitProbabilityCurve => {
            let end = params.time.unwrap_or(4.0 * params.n as f64);
            let times: Vec<f64> = (0..params.samples)
                .map(|i| end * i as f64 / (params.samples - 1) as f64)
                .collect();
            let probs = exit_probability_curve(params.n, &times)?;
            let mut t = Table::new(&["t", "probability"]);
            for (&x, &y) in times.iter().zip(&probs) {
                t.push(vec![x.into(), y.into()])?;
            }
            Ok(t)
        }
        FigureKind::QuantizationLhs => {
            let n = params.n;
            let m = params.samples;
            let mut t = Table::new(&["p", "lhs", "pole"]);
            let mut next_pole = 1;
            for i in 0..m {
                let p = PI * (i as f64 + 0.5) / m as f64;
                // Poles of sin((n+1)p)/sin(np) at p = k pi / n.
                while next_pole < n && (next_pole as f64 * PI / n as f64) < p {
                    t.push(vec![
                        (next_pole as f64 * PI / n as f64).into(),
                        Cell::Text(String::new()),
                        1u64.into(),
                    ])?;
                    next_pole += 1;
                }
                let y = quantization_lhs(n, p);
                if y.is_finite() {
                    t.push(vec![p.into(), y.into(), 0u64.into()])?;
                }
            }
            while next_pole < n {
                t.push(vec![
                    (next_pole as f64 * PI / n as f64).into(),
                    Cell::Text(String::new()),
                    1u64.into(),
                ])?;
                next_pole += 1;
            }
            Ok(t)
        }
    }
}
