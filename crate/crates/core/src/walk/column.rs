use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Basis, StateVector};
use crate::linalg::SymmetricCsr;
use crate::oracle::GluedTrees;
use crate::{Error, Result};

/// Tridiagonal chain with zero diagonal. Bond `i` joins sites `i` and `i+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnChain {
    couplings: Vec<f64>,
}

impl ColumnChain {
    /// Column subspace of the random-cycle graph of depth `n`: `2n+2` sites,
    /// bonds `sqrt2 * gamma` except `2 * gamma` on bond `n`.
    pub fn glued(n: u32, gamma: f64) -> Self {
        Self::with_defect(
            2 * n as usize + 2,
            n as usize,
            std::f64::consts::SQRT_2 * gamma,
            2.0 * gamma,
        )
    }

    /// Column subspace of the identified-leaves graph: `2n+1` sites, all
    /// bonds `sqrt2 * gamma`.
    pub fn identified(n: u32, gamma: f64) -> Self {
        ColumnChain {
            couplings: vec![std::f64::consts::SQRT_2 * gamma; 2 * n as usize],
        }
    }

    /// The `2n`-site chain with unit bonds and `sqrt 2` between sites `n`
    /// and `n+1` (1-based): the random-cycle graph of depth `n-1` at the
    /// default `gamma`.
    pub fn lemma_chain(n: u32) -> Self {
        assert!(n >= 1, "lemma chain needs n >= 1");
        Self::glued(n - 1, crate::DEFAULT_GAMMA)
    }

    pub fn with_defect(sites: usize, defect: usize, base: f64, strong: f64) -> Self {
        let mut couplings = vec![base; sites.saturating_sub(1)];
        if defect < couplings.len() {
            couplings[defect] = strong;
        }
        ColumnChain { couplings }
    }

    pub fn sites(&self) -> usize {
        self.couplings.len() + 1
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn to_csr(&self) -> SymmetricCsr {
        SymmetricCsr::from_edges(
            self.sites(),
            self.couplings
                .iter()
                .enumerate()
                .map(|(i, &w)| (i as u32, i as u32 + 1, w)),
        )
        .expect("chain bonds are in range")
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.sites();
        DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j {
                self.couplings[i]
            } else if j + 1 == i {
                self.couplings[j]
            } else {
                0.0
            }
        })
    }
}

/// `<col j|psi>` for every column `j`.
pub fn project_to_columns(graph: &GluedTrees, psi: &StateVector) -> Result<StateVector> {
    if psi.dim() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            got: psi.dim(),
        });
    }
    let amps = (0..graph.column_count())
        .map(|j| {
            let r = graph.column_range(j);
            let scale = (r.len() as f64).sqrt().recip();
            r.map(|v| psi.amplitudes[v as usize]).sum::<Complex64>() * scale
        })
        .collect();
    Ok(StateVector::new(Basis::Columns, amps))
}

/// `sum_j c_j |col j>` in the vertex basis.
pub fn lift_from_columns(graph: &GluedTrees, coeffs: &StateVector) -> Result<StateVector> {
    if coeffs.dim() != graph.column_count() as usize {
        return Err(Error::DimensionMismatch {
            expected: graph.column_count() as usize,
            got: coeffs.dim(),
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); graph.vertex_count()];
    for j in 0..graph.column_count() {
        let r = graph.column_range(j);
        let a = coeffs.amplitudes[j as usize] / (r.len() as f64).sqrt();
        for v in r {
            amps[v as usize] = a;
        }
    }
    Ok(StateVector::new(Basis::Vertices, amps))
}

pub fn column_state(graph: &GluedTrees, j: u32) -> Result<StateVector> {
    let c = StateVector::basis_state(Basis::Columns, graph.column_count() as usize, j as usize)?;
    lift_from_columns(graph, &c)
}

/// Norm of the component of `psi` outside the column subspace.
pub fn leakage(graph: &GluedTrees, psi: &StateVector) -> Result<f64> {
    let back = lift_from_columns(graph, &project_to_columns(graph, psi)?)?;
    Ok(back.distance(psi))
}
