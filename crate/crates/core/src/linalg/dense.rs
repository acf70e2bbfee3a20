use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector of `values[i]`.
    pub vectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn symmetric(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let scale = m.amax().max(1.0);
        if (&m - m.transpose()).amax() > 1e-12 * scale {
            return Err(Error::param("matrix", "not symmetric"));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        Ok(EigenSystem { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i M t) psi`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: psi.len(),
            });
        }
        let re = DVector::from_iterator(n, psi.iter().map(|z| z.re));
        let im = DVector::from_iterator(n, psi.iter().map(|z| z.im));
        let cr = self.vectors.tr_mul(&re);
        let ci = self.vectors.tr_mul(&im);
        let mut out_re = DVector::zeros(n);
        let mut out_im = DVector::zeros(n);
        for (e, &lambda) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -lambda * t);
            let c = Complex64::new(cr[e], ci[e]) * phase;
            let col = self.vectors.column(e);
            out_re.axpy(c.re, &col, 1.0);
            out_im.axpy(c.im, &col, 1.0);
        }
        Ok((0..n)
            .map(|i| Complex64::new(out_re[i], out_im[i]))
            .collect())
    }

    /// `<k| exp(-i M t) |j>`.
    pub fn amplitude(&self, k: usize, j: usize, t: f64) -> Complex64 {
        self.values
            .iter()
            .enumerate()
            .map(|(e, &lambda)| {
                Complex64::from_polar(self.vectors[(k, e)] * self.vectors[(j, e)], -lambda * t)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_rabi() {
        // [[0,1],[1,0]]: <1|e^{-iXt}|0> = -i sin t.
        let es =
            EigenSystem::symmetric(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let t = 0.7_f64;
        let a = es.amplitude(1, 0, t);
        assert!((a - Complex64::new(0.0, -t.sin())).norm() < 1e-14);
        let psi = es
            .evolve(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], t)
            .unwrap();
        assert!((psi[0] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert_eq!(es.values.len(), 2);
        assert!(es.values[0] < es.values[1]);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(EigenSystem::symmetric(m).is_err());
    }
}
