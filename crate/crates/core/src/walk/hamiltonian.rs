use crate::linalg::{expm_apply, EigenSystem, KrylovOptions, SymmetricCsr};
use crate::oracle::GluedTrees;
use crate::{Error, Result};

use super::StateVector;

/// Dense diagonalization is used up to this dimension.
pub const DENSE_LIMIT: usize = 4096;

/// `gamma` times the adjacency matrix of a simple graph.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkHamiltonian {
    gamma: f64,
    matrix: SymmetricCsr,
}

impl WalkHamiltonian {
    pub fn from_edges(vertices: usize, edges: &[(u32, u32)], gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param("gamma", format!("{gamma} must be positive")));
        }
        let matrix = SymmetricCsr::from_edges(vertices, edges.iter().map(|&(u, v)| (u, v, gamma)))?;
        if (0..vertices).any(|i| matrix.row(i).any(|(_, w)| w != gamma)) {
            return Err(Error::param("edges", "repeated edge"));
        }
        Ok(WalkHamiltonian { gamma, matrix })
    }

    pub fn glued(graph: &GluedTrees, gamma: f64) -> Result<Self> {
        Self::from_edges(graph.vertex_count(), graph.edges(), gamma)
    }

    /// A chain with the given bond strengths (already including `gamma`).
    pub fn chain(couplings: &[f64]) -> Result<Self> {
        let matrix = SymmetricCsr::from_edges(
            couplings.len() + 1,
            couplings
                .iter()
                .enumerate()
                .map(|(i, &w)| (i as u32, i as u32 + 1, w)),
        )?;
        Ok(WalkHamiltonian {
            gamma: f64::NAN,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &SymmetricCsr {
        &self.matrix
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Krylov,
    /// Dense up to [`DENSE_LIMIT`], Krylov above.
    Auto,
}

/// Reusable `exp(-iHt)`; the dense variant diagonalizes once.
#[derive(Clone, Debug)]
pub enum Propagator {
    Dense(EigenSystem),
    Krylov(SymmetricCsr, KrylovOptions),
}

impl Propagator {
    pub fn new(h: &WalkHamiltonian, method: Method) -> Result<Self> {
        let dense = match method {
            Method::Dense => true,
            Method::Krylov => false,
            Method::Auto => h.dim() <= DENSE_LIMIT,
        };
        Ok(if dense {
            Propagator::Dense(EigenSystem::symmetric(h.matrix.to_dense())?)
        } else {
            Propagator::Krylov(h.matrix.clone(), KrylovOptions::default())
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Propagator::Dense(es) => es.dim(),
            Propagator::Krylov(m, _) => m.dim(),
        }
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        if !t.is_finite() {
            return Err(Error::param("t", "must be finite"));
        }
        let out = match self {
            Propagator::Dense(es) => es.evolve(&psi.amplitudes, t)?,
            Propagator::Krylov(m, opts) => expm_apply(m, &psi.amplitudes, t, *opts)?,
        };
        Ok(StateVector::new(psi.basis, out))
    }
}

/// One-shot `exp(-iHt) psi`.
pub fn evolve(h: &WalkHamiltonian, psi: &StateVector, t: f64) -> Result<StateVector> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi.dim(),
        });
    }
    if t == 0.0 {
        return Ok(psi.clone());
    }
    Propagator::new(h, Method::Auto)?.evolve(psi, t)
}
