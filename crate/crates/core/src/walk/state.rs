use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Graph vertices, by vertex id.
    Vertices,
    /// Column states, by column index.
    Columns,
    /// Sites of a generic chain.
    Sites,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub basis: Basis,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Basis, amplitudes: Vec<Complex64>) -> Self {
        StateVector { basis, amplitudes }
    }

    pub fn basis_state(basis: Basis, dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: i,
            });
        }
        let mut a = vec![Complex64::new(0.0, 0.0); dim];
        a[i] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            basis,
            amplitudes: a,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Numerical(
                "cannot normalize a zero or non-finite state".into(),
            ));
        }
        self.amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        linalg::distance(&self.amplitudes, &other.amplitudes)
    }
}
