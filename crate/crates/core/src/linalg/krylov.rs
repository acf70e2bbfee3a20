use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{dense::EigenSystem, inner, norm_sqr, SymmetricCsr};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct KrylovOptions {
    /// Lanczos basis size per substep.
    pub dim: usize,
    /// Target global error in the 2-norm.
    pub tolerance: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            dim: 30,
            tolerance: 1e-12,
        }
    }
}

/// `exp(-i H t) psi` by restarted Lanczos with adaptive substeps.
///
/// Each substep of length `h` is accepted when the a-posteriori residual
/// `beta_m |e_m^T exp(-i T h) e_1|` is below `tolerance * h / |t|`.
pub fn expm_apply(
    h: &SymmetricCsr,
    psi: &[Complex64],
    t: f64,
    opts: KrylovOptions,
) -> Result<Vec<Complex64>> {
    let n = h.dim();
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.len(),
        });
    }
    if !t.is_finite() {
        return Err(Error::param("t", "must be finite"));
    }
    let mut v = psi.to_vec();
    if t == 0.0 || norm_sqr(&v) == 0.0 {
        return Ok(v);
    }
    let sign = t.signum();
    let total = t.abs();
    let m = opts.dim.clamp(2, n.max(2));
    let hnorm = h.norm_bound().max(1e-300);
    let mut step = (m as f64 / (2.0 * hnorm)).min(total);
    let mut done = 0.0;
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];

    while done < total {
        let beta0 = norm_sqr(&v).sqrt();
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut alpha = Vec::with_capacity(m);
        let mut beta = Vec::with_capacity(m);
        basis.push(v.iter().map(|z| z / beta0).collect());
        let mut breakdown = false;
        let mut residual_norm = 0.0;
        for k in 0..m {
            h.matvec(&basis[k], &mut scratch);
            let a = inner(&basis[k], &scratch).re;
            alpha.push(a);
            for (w, q) in scratch.iter_mut().zip(&basis[k]) {
                *w -= q * a;
            }
            if k > 0 {
                let b: f64 = beta[k - 1];
                for (w, q) in scratch.iter_mut().zip(&basis[k - 1]) {
                    *w -= q * b;
                }
            }
            // Full reorthogonalization keeps the small basis clean.
            for q in &basis {
                let c = inner(q, &scratch);
                for (w, qi) in scratch.iter_mut().zip(q) {
                    *w -= qi * c;
                }
            }
            let b = norm_sqr(&scratch).sqrt();
            if b < 1e-13 * hnorm {
                breakdown = true;
                break;
            }
            if k + 1 == m {
                residual_norm = b;
                break;
            }
            beta.push(b);
            basis.push(scratch.iter().map(|z| z / b).collect());
        }
        let k = alpha.len();
        let tri = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let small = EigenSystem::symmetric(tri)?;
        let mut e1 = vec![Complex64::new(0.0, 0.0); k];
        e1[0] = Complex64::new(1.0, 0.0);
        loop {
            let hstep = step.min(total - done);
            let y = small.evolve(&e1, sign * hstep)?;
            let err = if breakdown {
                0.0
            } else {
                beta0 * residual_norm * y[k - 1].norm()
            };
            if err <= opts.tolerance * hstep / total || hstep < 1e-12 * total {
                for z in v.iter_mut() {
                    *z = Complex64::new(0.0, 0.0);
                }
                for (q, c) in basis.iter().zip(&y) {
                    let c = c * beta0;
                    for (z, qi) in v.iter_mut().zip(q) {
                        *z += qi * c;
                    }
                }
                done += hstep;
                if hstep == step {
                    step *= 1.3;
                }
                break;
            }
            step = hstep * 0.5;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> SymmetricCsr {
        SymmetricCsr::from_edges(n, (0..n as u32 - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn matches_dense_on_path() {
        let h = path(60);
        let dense = EigenSystem::symmetric(h.to_dense()).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); 60];
        psi[3] = Complex64::new(1.0, 0.0);
        psi[40] = Complex64::new(0.0, 0.5);
        for &t in &[0.3, 5.0, 37.0, -12.0] {
            let a = expm_apply(&h, &psi, t, KrylovOptions::default()).unwrap();
            let b = dense.evolve(&psi, t).unwrap();
            assert!(super::super::distance(&a, &b) < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn tiny_space_breakdown_is_exact() {
        let h = path(2);
        let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let out = expm_apply(&h, &psi, 1.1, KrylovOptions::default()).unwrap();
        assert!((out[1] - Complex64::new(0.0, -(1.1f64).sin())).norm() < 1e-13);
    }
}
