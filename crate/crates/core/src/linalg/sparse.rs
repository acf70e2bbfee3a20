use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Real symmetric matrix in compressed-row form. Both triangles are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricCsr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SymmetricCsr {
    /// Builds `sum w (|u><v| + |v><u|)` over the given off-diagonal entries.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::param(
                    "edges",
                    format!("endpoint out of range ({u}, {v}) for n = {n}"),
                ));
            }
            if u == v {
                return Err(Error::param("edges", format!("self loop at {u}")));
            }
            rows[u as usize].push((v, w));
            rows[v as usize].push((u, w));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, w) in row {
                match cols.last() {
                    Some(&last) if vals.len() > row_ptr[row_ptr.len() - 1] && last == c => {
                        *vals.last_mut().unwrap() += w;
                    }
                    _ => {
                        cols.push(c);
                        vals.push(w);
                    }
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(SymmetricCsr {
            n,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(c, v)| x[c] * v).sum();
        }
    }

    /// Upper bound on the spectral radius (max absolute row sum).
    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                m[(i, c)] = v;
            }
        }
        m
    }
}
