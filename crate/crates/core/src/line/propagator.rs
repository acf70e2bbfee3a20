use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, bessel_j_orders};
use crate::{Error, Result};

/// `(-i)^m` for any integer `m`.
fn minus_i_pow(m: i64) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `<k| exp(-iHt) |j>` on the infinite line with unit hopping:
/// `(-i)^(k-j) J_(k-j)(2t)`.
pub fn infinite_line(j: i64, k: i64, t: f64) -> Complex64 {
    minus_i_pow(k - j) * bessel_j(k - j, 2.0 * t)
}

/// The same amplitude from its momentum integral
/// `(1/2pi) * integral exp(i p (k-j) - 2 i t cos p) dp`, by the periodic
/// trapezoid rule.
pub fn infinite_line_by_quadrature(j: i64, k: i64, t: f64) -> Complex64 {
    let d = (k - j) as f64;
    let points = 128 + 4 * ((k - j).unsigned_abs() as usize + (2.0 * t.abs()).ceil() as usize);
    let h = 2.0 * PI / points as f64;
    let s: Complex64 = (0..points)
        .map(|i| {
            let p = i as f64 * h;
            Complex64::from_polar(1.0, p * d - 2.0 * t * p.cos())
        })
        .sum();
    s / points as f64
}

/// Bessel orders beyond this are negligible (below about 1e-17) at `x = 2t`.
fn reach(t: f64) -> f64 {
    let x = 2.0 * t.abs();
    x + 20.0 + 12.0 * x.cbrt()
}

/// Which images `l` in `-l_max..=l_max` enter the finite-line sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRange {
    pub l_max: u32,
}

impl ImageRange {
    /// Smallest range whose omitted images all have negligible amplitude.
    pub fn auto(t: f64, length: u32) -> Self {
        let period = 2.0 * (length as f64 + 1.0);
        let l_max = ((reach(t) + length as f64) / period).ceil() as u32;
        ImageRange { l_max }
    }

    fn nearest_omitted(self, j: i64, k: i64, length: u32) -> f64 {
        let period = 2 * (length as i64 + 1);
        let l = self.l_max as i64 + 1;
        [
            k + l * period - j,
            k - l * period - j,
            -k + l * period - j,
            -k - l * period - j,
        ]
        .iter()
        .map(|o| o.unsigned_abs() as f64)
        .fold(f64::INFINITY, f64::min)
    }
}

/// `<k| exp(-iHt) |j>` on the segment `1..=length` with unit hopping and
/// open ends, as a sum over images of the infinite-line propagator.
pub fn finite_line(j: i64, k: i64, t: f64, length: u32, images: ImageRange) -> Result<Complex64> {
    if length == 0 || !(1..=length as i64).contains(&j) || !(1..=length as i64).contains(&k) {
        return Err(Error::param(
            "site",
            format!("sites ({j}, {k}) not in 1..={length}"),
        ));
    }
    let nearest = images.nearest_omitted(j, k, length);
    let required = reach(t);
    if nearest <= required {
        return Err(Error::InsufficientTruncation {
            order: nearest,
            required,
        });
    }
    let period = 2 * (length as i64 + 1);
    let l = images.l_max as i64;
    let max_order = (-l..=l)
        .flat_map(|l| [k + l * period - j, -k + l * period - j])
        .map(|o| o.unsigned_abs())
        .max()
        .unwrap_or(0) as usize;
    let jv = bessel_j_orders(max_order, 2.0 * t);
    let g = |m: i64| {
        let v = jv[m.unsigned_abs() as usize];
        let v = if m < 0 && m % 2 != 0 { -v } else { v };
        minus_i_pow(m) * v
    };
    Ok((-l..=l)
        .map(|l| g(k + l * period - j) - g(-k + l * period - j))
        .sum())
}

pub fn finite_line_auto(j: i64, k: i64, t: f64, length: u32) -> Result<Complex64> {
    finite_line(j, k, t, length, ImageRange::auto(t, length))
}

/// `|<j+d| exp(-iHt) |j>|` on the infinite line for `d = 0..=max_distance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefrontProfile {
    pub t: f64,
    pub magnitudes: Vec<f64>,
}

pub fn wavefront_profile(t: f64, max_distance: usize) -> WavefrontProfile {
    let jv = bessel_j_orders(max_distance, 2.0 * t);
    WavefrontProfile {
        t,
        magnitudes: jv.iter().map(|v| v.abs()).collect(),
    }
}

impl WavefrontProfile {
    /// Distance of the largest magnitude: the leading edge, near `2t`.
    pub fn front_distance(&self) -> usize {
        self.magnitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(d, _)| d)
    }

    pub fn front_magnitude(&self) -> f64 {
        self.magnitudes[self.front_distance()]
    }

    /// Largest magnitude at distance `>= d`.
    pub fn max_beyond(&self, d: usize) -> f64 {
        self.magnitudes
            .get(d..)
            .map_or(0.0, |m| m.iter().copied().fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{EigenSystem, SymmetricCsr};
    use proptest::prelude::*;

    #[test]
    fn bessel_and_quadrature_routes_agree() {
        for (j, k, t) in [(0, 0, 1.0), (0, 3, 2.5), (5, -4, 10.0), (0, 30, 20.0)] {
            let a = infinite_line(j, k, t);
            let b = infinite_line_by_quadrature(j, k, t);
            assert!((a - b).norm() < 1e-12, "{j} {k} {t}: {a} vs {b}");
        }
    }

    #[test]
    fn finite_line_matches_dense_evolution() {
        let length = 12u32;
        let h = SymmetricCsr::from_edges(length as usize, (0..length - 1).map(|i| (i, i + 1, 1.0)))
            .unwrap();
        let es = EigenSystem::symmetric(h.to_dense()).unwrap();
        for &t in &[0.5, 3.0, 17.0] {
            for j in 1..=length as i64 {
                for k in 1..=length as i64 {
                    let a = finite_line_auto(j, k, t, length).unwrap();
                    let b = es.amplitude(k as usize - 1, j as usize - 1, t);
                    assert!((a - b).norm() < 1e-11, "t = {t}, ({j}, {k})");
                }
            }
        }
    }

    #[test]
    fn short_truncation_is_rejected() {
        let err = finite_line(1, 1, 30.0, 5, ImageRange { l_max: 1 }).unwrap_err();
        assert!(matches!(err, Error::InsufficientTruncation { .. }));
        assert!(finite_line(0, 1, 1.0, 5, ImageRange { l_max: 1 }).is_err());
    }

    #[test]
    fn front_moves_at_speed_two() {
        let p = wavefront_profile(50.0, 200);
        let d = p.front_distance();
        assert!((95..=100).contains(&d), "front at {d}");
        // Ahead of the front the amplitude decays faster than exponentially.
        assert!(p.max_beyond(130) < 1e-7);
        assert!(p.magnitudes[120] > 1e-6);
    }

    proptest! {
        #[test]
        fn propagator_is_unitary_in_its_column(t in 0.0f64..30.0) {
            let reach = (2.0 * t) as i64 + 60;
            let s: f64 = (-reach..=reach).map(|k| infinite_line(0, k, t).norm_sqr()).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn translation_invariance(j in -50i64..50, d in -40i64..40, t in 0.0f64..20.0) {
            prop_assert!((infinite_line(j, j + d, t) - infinite_line(0, d, t)).norm() < 1e-14);
            prop_assert!((infinite_line(j, j + d, t) - infinite_line(j + d, j, t)).norm() < 1e-14);
        }
    }
}
