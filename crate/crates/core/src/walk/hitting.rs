//! Exit probabilities of the column chain and the time-averaged hitting
//! bound.
//!
//! The time-averaged experiments use the `2n`-site chain, whose first and
//! last sites are the entrance and exit columns of the depth-`(n-1)`
//! random-cycle graph.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ColumnChain;
use crate::linalg::EigenSystem;
use crate::line::min_gap;
use crate::rng::{self, Artifact};
use crate::{Error, Result};

/// Curve values below this are treated as numerical noise when looking for
/// the first arrival peak.
pub const CURVE_NOISE_FLOOR: f64 = 1e-10;

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::param("times", format!("non-finite time {t}")));
    }
    Ok(())
}

/// `<col 2n+1| exp(-iHt) |col 0>` on the chain of the depth-`n` graph.
pub fn exit_amplitudes(n: u32, gamma: f64, times: &[f64]) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    check_times(times)?;
    let chain = ColumnChain::glued(n, gamma);
    let es = EigenSystem::symmetric(chain.to_dense())?;
    let last = chain.sites() - 1;
    // Distinct sites: exactly zero at t = 0 rather than rounding noise.
    Ok(times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                es.amplitude(last, 0, t)
            }
        })
        .collect())
}

pub fn exit_probability_curve(n: u32, times: &[f64]) -> Result<Vec<f64>> {
    Ok(exit_amplitudes(n, crate::DEFAULT_GAMMA, times)?
        .iter()
        .map(|z| z.norm_sqr().min(1.0))
        .collect())
}

/// Index of the first interior local maximum at or above `floor`.
pub fn first_local_maximum(values: &[f64], floor: f64) -> Option<usize> {
    (1..values.len().saturating_sub(1))
        .find(|&i| values[i] >= floor && values[i] > values[i - 1] && values[i] >= values[i + 1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HittingMethod {
    ClosedForm,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingResult {
    pub n: u32,
    pub epsilon: f64,
    pub tau: f64,
    /// Time-averaged exit probability.
    pub probability: f64,
    /// `(1 - epsilon) / (2n)`.
    pub bound: f64,
    /// `sum_E <E|1>^2 <E|2n>^2`.
    pub first_term: f64,
    pub cross_term: f64,
    /// `sum_{E != E'} |w_E w_E'| / (|E - E'| tau)`.
    pub cross_bound: f64,
    pub gap: f64,
    /// Whether the measured gap exceeds `8 / n^3`.
    pub gap_above_8_over_n3: bool,
    pub method: HittingMethod,
    pub samples: u64,
    pub std_error: Option<f64>,
    pub seed: Option<u64>,
}

impl HittingResult {
    pub fn passes(&self) -> bool {
        self.probability > self.bound
    }
}

struct LemmaChain {
    energies: Vec<f64>,
    /// `w_E = <2n|E><E|1>`.
    weights: Vec<f64>,
    gap: f64,
}

fn lemma_chain(n: u32) -> Result<LemmaChain> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let es = EigenSystem::symmetric(ColumnChain::lemma_chain(n).to_dense())?;
    let last = 2 * n as usize - 1;
    let weights = (0..es.dim())
        .map(|e| es.vectors[(0, e)] * es.vectors[(last, e)])
        .collect();
    let gap = if n >= 2 {
        min_gap(n)?.gap
    } else {
        es.values[1] - es.values[0]
    };
    Ok(LemmaChain {
        energies: es.values,
        weights,
        gap,
    })
}

fn check_eps_tau(epsilon: f64, tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::param("tau", format!("{tau} must be positive")));
    }
    if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", format!("{epsilon} not in (0, 1)")));
    }
    Ok(())
}

/// `4n / (epsilon * gap)`.
pub fn lemma_tau(n: u32, epsilon: f64) -> Result<f64> {
    Ok(4.0 * n as f64 / (epsilon * lemma_chain(n)?.gap))
}

/// `n^4 / (2 epsilon)`.
pub fn theorem_tau(n: u32, epsilon: f64) -> f64 {
    (n as f64).powi(4) / (2.0 * epsilon)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Exact average of `|<2n| exp(-iHt) |1>|^2` over `t` uniform in `[0, tau]`:
/// `sum_E w_E^2 + sum_{E != E'} w_E w_E' sinc((E - E') tau)`.
pub fn lemma1_average(n: u32, epsilon: f64, tau: f64) -> Result<HittingResult> {
    check_eps_tau(epsilon, tau)?;
    let ch = lemma_chain(n)?;
    let first: f64 = ch.weights.iter().map(|w| w * w).sum();
    let (mut cross, mut cross_bound) = (0.0, 0.0);
    for (a, (&ea, &wa)) in ch.energies.iter().zip(&ch.weights).enumerate() {
        for (b, (&eb, &wb)) in ch.energies.iter().zip(&ch.weights).enumerate() {
            if a != b {
                cross += wa * wb * sinc((ea - eb) * tau);
                cross_bound += (wa * wb).abs() / ((ea - eb).abs() * tau);
            }
        }
    }
    Ok(HittingResult {
        n,
        epsilon,
        tau,
        probability: (first + cross).clamp(0.0, 1.0),
        bound: (1.0 - epsilon) / (2.0 * n as f64),
        first_term: first,
        cross_term: cross,
        cross_bound,
        gap: ch.gap,
        gap_above_8_over_n3: ch.gap > 8.0 / (n as f64).powi(3),
        method: HittingMethod::ClosedForm,
        samples: 0,
        std_error: None,
        seed: None,
    })
}

/// Monte-Carlo estimate of the same average from `samples` uniform times.
pub fn lemma1_sampled(
    n: u32,
    epsilon: f64,
    tau: f64,
    samples: u64,
    seed: u64,
) -> Result<HittingResult> {
    check_eps_tau(epsilon, tau)?;
    if samples < 2 {
        return Err(Error::param("samples", "need at least 2"));
    }
    let mut r = lemma1_average(n, epsilon, tau)?;
    let ch = lemma_chain(n)?;
    let mut rng = rng::stream(seed, Artifact::Sampling);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let t = rng.gen_range(0.0..tau);
        let amp: Complex64 = ch
            .energies
            .iter()
            .zip(&ch.weights)
            .map(|(&e, &w)| Complex64::from_polar(w, -e * t))
            .sum();
        let p = amp.norm_sqr();
        sum += p;
        sum2 += p * p;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    r.probability = mean;
    r.cross_term = mean - r.first_term;
    r.method = HittingMethod::Sampled;
    r.samples = samples;
    r.std_error = Some((var / m).sqrt());
    r.seed = Some(seed);
    Ok(r)
}

/// Closed-form average with `tau = n^4 / (2 epsilon)`.
pub fn theorem1_experiment(n: u32, epsilon: f64) -> Result<HittingResult> {
    lemma1_average(n, epsilon, theorem_tau(n, epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EigenSystem;

    #[test]
    fn curve_basics() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.25).collect();
        let c = exit_probability_curve(10, &times).unwrap();
        assert_eq!(c[0], 0.0);
        assert!(c.iter().all(|&p| (0.0..=1.0).contains(&p)));
        assert!(exit_probability_curve(0, &times).is_err());
        assert!(exit_probability_curve(3, &[f64::NAN]).is_err());
    }

    #[test]
    fn first_arrival_n100() {
        let times: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.1).collect();
        let c = exit_probability_curve(100, &times).unwrap();
        let i = first_local_maximum(&c, CURVE_NOISE_FLOOR).unwrap();
        assert!((80.0..=130.0).contains(&times[i]), "peak at {}", times[i]);
        assert!(c[i] > 100f64.powf(-2.0 / 3.0) / 10.0);
    }

    #[test]
    fn first_term_dominates_one_over_2n() {
        for n in 2..30 {
            let r = lemma1_average(n, 0.5, 1.0).unwrap();
            assert!(r.first_term >= 1.0 / (2.0 * n as f64) - 1e-14, "n = {n}");
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        // Independent route: trapezoid rule on the dense propagator.
        let n = 4;
        let tau = 37.0;
        let es = EigenSystem::symmetric(ColumnChain::lemma_chain(n).to_dense()).unwrap();
        let m = 20000;
        let h = tau / m as f64;
        let f = |t: f64| es.amplitude(7, 0, t).norm_sqr();
        let quad = (0..=m)
            .map(|i| {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                w * f(i as f64 * h)
            })
            .sum::<f64>()
            * h
            / tau;
        let cf = lemma1_average(n, 0.5, tau).unwrap().probability;
        assert!((quad - cf).abs() < 1e-7, "{quad} vs {cf}");
    }

    #[test]
    fn lemma_examples() {
        let tau = lemma_tau(4, 0.5).unwrap();
        assert!(lemma1_average(4, 0.5, tau).unwrap().probability > 1.0 / 16.0);
        let r = theorem1_experiment(8, 0.5).unwrap();
        assert!(r.passes() && r.probability > 1.0 / 32.0 && r.probability <= 1.0);
        assert!(theorem1_experiment(4, 0.9).unwrap().probability > 0.0125);
        assert!(lemma1_average(4, 0.5, 0.0).is_err());
        assert!(lemma1_average(4, 0.5, -1.0).is_err());
    }

    #[test]
    fn sampled_estimate_converges() {
        let tau = lemma_tau(5, 0.5).unwrap();
        let cf = lemma1_average(5, 0.5, tau).unwrap();
        let mc = lemma1_sampled(5, 0.5, tau, 100_000, 3).unwrap();
        let se = mc.std_error.unwrap();
        assert!(
            (mc.probability - cf.probability).abs() < 3.0 * se,
            "{} vs {} (se {se})",
            mc.probability,
            cf.probability
        );
        assert_eq!(mc.method, HittingMethod::Sampled);
    }
}
