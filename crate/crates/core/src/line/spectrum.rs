//! Spectrum of the `2n`-site chain with unit hopping and a `sqrt 2` bond
//! between sites `n` and `n+1`.
//!
//! Reflection about the middle splits the eigenvectors into even and odd
//! ones. An even (odd) eigenvector is `sin(pj)` on the left half, mirrored
//! with sign `+` (`-`), and `E = 2 cos p`; matching at the defect gives
//! `sin((n+1)p) = s sqrt2 sin(np)` with `s = +1` (`-1`). For `n >= 3` each
//! branch loses one real root to a bound state outside the band, found
//! from `cosh k + coth(nk) sinh k = sqrt 2`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Symmetric under reflection; `s = +1`.
    Even,
    /// Antisymmetric under reflection; `s = -1`.
    Odd,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Even => 1.0,
            Branch::Odd => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StateKind {
    /// Real momentum `p` in `(0, pi)`.
    Band { p: f64 },
    /// `p = ik` (even branch, above the band) or `p = pi + ik` (odd branch,
    /// below the band).
    Bound { k: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenstate {
    pub energy: f64,
    pub branch: Branch,
    pub kind: StateKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: u32,
    /// All `2n` states, ascending in energy.
    pub states: Vec<Eigenstate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: u32,
    pub gap: f64,
    pub lower: f64,
    pub upper: f64,
    /// `gap * n^3`.
    pub scaled: f64,
}

/// `sin((n+1)p) / sin(np)`; eigenvalues sit where this equals `+-sqrt 2`.
pub fn quantization_lhs(n: u32, p: f64) -> f64 {
    ((n as f64 + 1.0) * p).sin() / (n as f64 * p).sin()
}

/// Pole-free form `sin((n+1)p) - s sqrt2 sin(np)`.
fn residual(n: u32, p: f64, s: f64) -> f64 {
    ((n as f64 + 1.0) * p).sin() - s * SQRT_2 * (n as f64 * p).sin()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn band_roots(n: u32, branch: Branch) -> Vec<f64> {
    let s = branch.sign();
    let f = |p: f64| residual(n, p, s);
    // Same-branch roots are about pi/n apart; sample far more finely.
    let m = 64 * (n as usize + 1);
    let h = PI / m as f64;
    let mut roots = Vec::new();
    let mut prev_p = h * 1e-3;
    let mut prev = f(prev_p);
    for i in 1..=m {
        let p = if i == m { PI - h * 1e-3 } else { i as f64 * h };
        let v = f(p);
        if v == 0.0 {
            roots.push(p);
        } else if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            roots.push(bisect(prev_p, p, f));
        }
        prev_p = p;
        prev = v;
    }
    roots
}

fn bound_k(n: u32) -> Option<f64> {
    let nf = n as f64;
    let g = |k: f64| k.cosh() + k.sinh() / (nf * k).tanh() - SQRT_2;
    // g(0+) = 1 + 1/n - sqrt2; a root exists exactly when that is negative.
    if 1.0 + 1.0 / nf >= SQRT_2 {
        return None;
    }
    Some(bisect(1e-12, 2.0, g))
}

/// Expected number of in-band roots per branch.
fn band_count(n: u32) -> usize {
    if n >= 3 {
        n as usize - 1
    } else {
        n as usize
    }
}

pub fn quantization_roots(n: u32) -> Result<SpectralReport> {
    if n == 0 || n > 5000 {
        return Err(Error::param("n", format!("{n} not in 1..=5000")));
    }
    let mut states = Vec::with_capacity(2 * n as usize);
    for branch in [Branch::Even, Branch::Odd] {
        let roots = band_roots(n, branch);
        if roots.len() != band_count(n) {
            return Err(Error::RootCount {
                n,
                found: roots.len(),
                expected: band_count(n),
            });
        }
        states.extend(roots.into_iter().map(|p| Eigenstate {
            energy: 2.0 * p.cos(),
            branch,
            kind: StateKind::Band { p },
        }));
    }
    if let Some(k) = bound_k(n) {
        let e = 2.0 * k.cosh();
        states.push(Eigenstate {
            energy: e,
            branch: Branch::Even,
            kind: StateKind::Bound { k },
        });
        states.push(Eigenstate {
            energy: -e,
            branch: Branch::Odd,
            kind: StateKind::Bound { k },
        });
    }
    if states.len() != 2 * n as usize {
        return Err(Error::RootCount {
            n,
            found: states.len(),
            expected: 2 * n as usize,
        });
    }
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(SpectralReport { n, states })
}

/// `sinh(k j) / sinh(k n)` without overflow.
fn sinh_ratio(k: f64, j: f64, n: f64) -> f64 {
    (k * (j - n)).exp() * (-(-2.0 * k * j).exp_m1()) / (-(-2.0 * k * n).exp_m1())
}

impl SpectralReport {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Unit eigenvector of `states[i]` over sites `1..=2n`.
    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        let st = self.states[i];
        let n = self.n as usize;
        let s = st.branch.sign();
        let left = |j: usize| -> f64 {
            match st.kind {
                StateKind::Band { p } => (p * j as f64).sin(),
                StateKind::Bound { k } => {
                    let mag = sinh_ratio(k, j as f64, n as f64);
                    match st.branch {
                        Branch::Even => mag,
                        Branch::Odd => {
                            if j % 2 == 0 {
                                mag
                            } else {
                                -mag
                            }
                        }
                    }
                }
            }
        };
        let mut v: Vec<f64> = (1..=2 * n)
            .map(|j| {
                if j <= n {
                    left(j)
                } else {
                    s * left(2 * n + 1 - j)
                }
            })
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    }

    pub fn min_gap(&self) -> GapReport {
        let (i, gap) = self
            .states
            .windows(2)
            .map(|w| w[1].energy - w[0].energy)
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, f64::INFINITY));
        let (lower, upper) = if self.states.len() >= 2 {
            (self.states[i].energy, self.states[i + 1].energy)
        } else {
            (f64::NAN, f64::NAN)
        };
        GapReport {
            n: self.n,
            gap,
            lower,
            upper,
            scaled: gap * (self.n as f64).powi(3),
        }
    }
}

pub fn min_gap(n: u32) -> Result<GapReport> {
    Ok(quantization_roots(n)?.min_gap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EigenSystem;
    use crate::walk::ColumnChain;
    use proptest::prelude::*;

    fn dense(n: u32) -> EigenSystem {
        EigenSystem::symmetric(ColumnChain::lemma_chain(n).to_dense()).unwrap()
    }

    #[test]
    fn matches_dense_diagonalization() {
        for n in 1..=40 {
            let rep = quantization_roots(n).unwrap();
            let es = dense(n);
            for (a, b) in rep.energies().iter().zip(&es.values) {
                assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn small_chains() {
        // Two sites joined by sqrt 2.
        let e = quantization_roots(1).unwrap().energies();
        assert!((e[0] + SQRT_2).abs() < 1e-14 && (e[1] - SQRT_2).abs() < 1e-14);
        // Four sites, no bound state yet: +-(sqrt3 +- 1)/sqrt2.
        let rep = quantization_roots(2).unwrap();
        assert!(rep
            .states
            .iter()
            .all(|s| matches!(s.kind, StateKind::Band { .. })));
        let want = [-(3f64.sqrt() + 1.0) / SQRT_2, -(3f64.sqrt() - 1.0) / SQRT_2];
        assert!((rep.states[0].energy - want[0]).abs() < 1e-13);
        assert!((rep.states[1].energy - want[1]).abs() < 1e-13);
    }

    #[test]
    fn bound_states_from_three() {
        for n in 3..30 {
            let rep = quantization_roots(n).unwrap();
            let bound: Vec<_> = rep
                .states
                .iter()
                .filter(|s| matches!(s.kind, StateKind::Bound { .. }))
                .collect();
            assert_eq!(bound.len(), 2);
            assert!(bound.iter().all(|s| s.energy.abs() > 2.0));
        }
        // Large n: k tends to ln sqrt2, energy to 3/sqrt2.
        let top = quantization_roots(200)
            .unwrap()
            .states
            .last()
            .copied()
            .unwrap();
        assert!((top.energy - 3.0 / SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_solve_the_chain() {
        for n in [1u32, 2, 3, 7, 25] {
            let rep = quantization_roots(n).unwrap();
            let h = ColumnChain::lemma_chain(n).to_dense();
            for (i, st) in rep.states.iter().enumerate() {
                let v = nalgebra::DVector::from_vec(rep.eigenvector(i));
                let r = &h * &v - &v * st.energy;
                assert!(r.amax() < 1e-12, "n = {n}, state {i}");
                let mirrored: Vec<f64> = v.iter().rev().copied().collect();
                let sgn = st.branch.sign();
                assert!(v
                    .iter()
                    .zip(&mirrored)
                    .all(|(a, b)| (a - sgn * b).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn gap_scaling() {
        // Asymptotically the gap is 4 sqrt2 pi^2 / n^3.
        let limit = 4.0 * SQRT_2 * PI * PI;
        let g = min_gap(400).unwrap();
        assert!(
            (g.scaled - limit).abs() / limit < 0.02,
            "scaled gap {}",
            g.scaled
        );
        for n in 2..=60 {
            assert!(min_gap(n).unwrap().scaled > 8.0, "n = {n}");
        }
    }

    #[test]
    fn lhs_hits_sqrt2_at_roots() {
        let rep = quantization_roots(9).unwrap();
        for st in &rep.states {
            if let StateKind::Band { p } = st.kind {
                assert!((quantization_lhs(9, p) - st.branch.sign() * SQRT_2).abs() < 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn trace_identities(n in 1u32..120) {
            let e = quantization_roots(n).unwrap().energies();
            // tr H = 0 and tr H^2 = 2 * (sum of squared couplings).
            let tr: f64 = e.iter().sum();
            let tr2: f64 = e.iter().map(|x| x * x).sum();
            prop_assert!(tr.abs() < 1e-9);
            prop_assert!((tr2 - 2.0 * (2.0 * n as f64 - 2.0 + 2.0)).abs() < 1e-8);
        }
    }
}
