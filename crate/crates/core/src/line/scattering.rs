//! Scattering off one modified bond of an otherwise uniform line.
//!
//! The line has unit hopping except for the bond between sites `0` and `1`,
//! which has strength `alpha`. Amplitudes refer to the stationary state
//! `exp(ipj) + R exp(-ipj)` left of the defect and `T exp(ipj)` right of it.
//! Under `exp(-iHt)` the wave moving towards larger `j` is the conjugate
//! `exp(-ipj)` (group velocity `2 sin p`), which scatters with `conj(T)` and
//! `conj(R)`; probabilities are the same.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{expm_apply, norm_sqr, KrylovOptions, SymmetricCsr};
use crate::{Error, Result};

fn check(p: f64, alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("{alpha} must be positive")));
    }
    if !(0.0..=PI).contains(&p) {
        return Err(Error::param("p", format!("{p} not in [0, pi]")));
    }
    if p.sin().abs() < 1e-12 {
        return Err(Error::DegenerateMomentum(p));
    }
    Ok(())
}

fn denominator(p: f64, alpha: f64) -> Complex64 {
    let a2 = alpha * alpha;
    Complex64::new((a2 - 1.0) * p.cos(), (a2 + 1.0) * p.sin())
}

/// Transmission amplitude `2i alpha sin p / ((alpha^2-1) cos p + i(alpha^2+1) sin p)`.
pub fn transmission(p: f64, alpha: f64) -> Result<Complex64> {
    check(p, alpha)?;
    Ok(Complex64::new(0.0, 2.0 * alpha * p.sin()) / denominator(p, alpha))
}

/// Reflection amplitude `(1-alpha^2) exp(ip) / ((alpha^2-1) cos p + i(alpha^2+1) sin p)`.
pub fn reflection(p: f64, alpha: f64) -> Result<Complex64> {
    check(p, alpha)?;
    Ok(Complex64::from_polar(1.0 - alpha * alpha, p) / denominator(p, alpha))
}

pub fn transmission_probability(p: f64, alpha: f64) -> Result<f64> {
    Ok(transmission(p, alpha)?.norm_sqr())
}

/// `|T|^2` extended to all real `p` (even and `2pi`-periodic; zero where
/// `sin p = 0`).
fn transmission_probability_any(p: f64, alpha: f64) -> f64 {
    let (s, c) = (p.sin(), p.cos());
    let a2 = alpha * alpha;
    let num = 4.0 * a2 * s * s;
    let den = (a2 - 1.0).powi(2) * c * c + (a2 + 1.0).powi(2) * s * s;
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub alpha: f64,
    /// Carrier momentum in `(0, pi)`.
    pub p0: f64,
    /// Standard deviation of the position distribution, in sites.
    pub width: f64,
    /// Initial distance of the packet center to the left of the defect.
    pub offset: f64,
    /// Sites on each side of the defect.
    pub half_length: usize,
    /// Evolution time; defaults to the time for the center to travel
    /// `2 * offset`.
    pub time: Option<f64>,
}

impl PacketSpec {
    pub fn new(alpha: f64, p0: f64) -> Self {
        PacketSpec {
            alpha,
            p0,
            width: 20.0,
            offset: 300.0,
            half_length: 900,
            time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketOutcome {
    pub time: f64,
    pub transmitted: f64,
    pub reflected: f64,
    /// `integral |T(p)|^2 |phi(p)|^2 dp` over the initial momentum density.
    pub predicted: f64,
    pub norm: f64,
}

/// Sites within this many of either end must stay empty.
const GUARD: usize = 10;
const GUARD_PROBABILITY: f64 = 1e-9;

/// Evolves a Gaussian packet through the defect and compares the
/// transmitted probability with the momentum-averaged `|T|^2`.
pub fn wavepacket_scatter(spec: &PacketSpec) -> Result<PacketOutcome> {
    check(spec.p0, spec.alpha)?;
    if !(spec.width > 0.0 && spec.offset > 0.0) {
        return Err(Error::param("packet", "width and offset must be positive"));
    }
    let half = spec.half_length as i64;
    let sites = 2 * spec.half_length;
    // Site j in -half+1..=half sits at index j + half - 1; the defect bond
    // joins sites 0 and 1.
    let index = |j: i64| (j + half - 1) as usize;
    let x0 = -spec.offset;
    let first = x0 - 8.0 * spec.width;
    if first <= (-half + 1 + GUARD as i64) as f64 {
        return Err(Error::InvalidExperiment(format!(
            "packet starting at {x0} with width {} does not fit in {} sites left of the defect",
            spec.width, spec.half_length
        )));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); sites];
    for j in (-half + 1)..=half {
        let d = j as f64 - x0;
        let env = (-d * d / (4.0 * spec.width * spec.width)).exp();
        psi[index(j)] = Complex64::from_polar(env, -spec.p0 * j as f64);
    }
    let norm0 = norm_sqr(&psi).sqrt();
    psi.iter_mut().for_each(|z| *z /= norm0);

    let predicted = {
        let support: Vec<(i64, Complex64)> = ((-half + 1)..=half)
            .map(|j| (j, psi[index(j)]))
            .filter(|(_, z)| z.norm_sqr() > 1e-30)
            .collect();
        let m = 4096;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..m {
            let p = -PI + 2.0 * PI * i as f64 / m as f64;
            let phi: Complex64 = support
                .iter()
                .map(|&(j, z)| z * Complex64::from_polar(1.0, -p * j as f64))
                .sum();
            let w = phi.norm_sqr();
            num += w * transmission_probability_any(p, spec.alpha);
            den += w;
        }
        num / den
    };

    let h = SymmetricCsr::from_edges(
        sites,
        ((-half + 1)..half).map(|j| {
            let w = if j == 0 { spec.alpha } else { 1.0 };
            (index(j) as u32, index(j + 1) as u32, w)
        }),
    )?;
    let time = spec
        .time
        .unwrap_or(2.0 * spec.offset / (2.0 * spec.p0.sin()));
    let out = expm_apply(&h, &psi, time, KrylovOptions::default())?;
    let edge: f64 = out[..GUARD]
        .iter()
        .chain(&out[sites - GUARD..])
        .map(|z| z.norm_sqr())
        .sum();
    if edge > GUARD_PROBABILITY {
        return Err(Error::InvalidExperiment(format!(
            "packet reached the lattice boundary (probability {edge:.3e} within {GUARD} sites of an end)"
        )));
    }
    let reflected: f64 = out[..index(1)].iter().map(|z| z.norm_sqr()).sum();
    let transmitted: f64 = out[index(1)..].iter().map(|z| z.norm_sqr()).sum();
    Ok(PacketOutcome {
        time,
        transmitted,
        reflected,
        predicted,
        norm: reflected + transmitted,
    })
}
