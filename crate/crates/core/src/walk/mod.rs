//! Continuous-time quantum walk `exp(-iHt)` with `H = gamma * A`.
//!
//! On the glued-trees graphs the uniform column superpositions span an
//! invariant subspace, and `H` restricted to it is a chain with one
//! strengthened bond ([`ColumnChain`]). Full-graph and chain evolution are
//! both available and are cross-checked in the tests.

mod column;
mod hamiltonian;
mod hitting;
mod state;

pub use column::{column_state, leakage, lift_from_columns, project_to_columns, ColumnChain};
pub use hamiltonian::{evolve, Method, Propagator, WalkHamiltonian, DENSE_LIMIT};
pub use hitting::{
    exit_amplitudes, exit_probability_curve, first_local_maximum, lemma1_average, lemma1_sampled,
    lemma_tau, theorem1_experiment, theorem_tau, HittingMethod, HittingResult, CURVE_NOISE_FLOOR,
};
pub use state::{Basis, StateVector};
