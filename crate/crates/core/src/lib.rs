//! Quantum walks on glued binary trees.
//!
//! The crate is organized around the query model: a graph is only ever
//! reached through an [`oracle`], and everything downstream (continuous-time
//! walks, the circuit-level simulator, the classical traversals and the
//! lower-bound games) is written against that interface.
//!
//! * [`oracle`] builds the glued-trees graphs, their random names and the
//!   nine-color edge coloring, and serves counted oracle queries.
//! * [`walk`] evolves the walk Hamiltonian on the full graph and on the
//!   reduced column chain, and computes hitting probabilities.
//! * [`circuit`] simulates the gate-level implementation of the walk:
//!   oracle permutations, the two-qubit `W` gate, and first-order Trotter
//!   products over the color classes.
//! * [`line`] holds the analytic side: Bessel-function propagators,
//!   defect scattering and the quantization condition of the column chain.
//! * [`classical`] covers the classical walk, the deterministic traversal
//!   algorithms, and the Monte-Carlo harness for the query games.
//! * [`harness`] ties everything into reproducible experiment records.

pub mod circuit;
pub mod classical;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod line;
pub mod oracle;
pub mod rng;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default hopping strength of the walk Hamiltonian, `1/sqrt(2)`.
pub const DEFAULT_GAMMA: f64 = std::f64::consts::FRAC_1_SQRT_2;
