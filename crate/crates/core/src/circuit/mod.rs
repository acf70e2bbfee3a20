//! Gate-level simulation of the walk in the oracle model.
//!
//! The register holds `|a, b, r, anc>`: two name registers, the
//! invalid-edge flag and one ancilla. `V_c` XORs the color-`c` neighbor of
//! `a` into `b` (and the invalid flag into `r`), `T` swaps `a` and `b` when
//! `r = 0`, and `H = sum_c V_c T V_c` acts as the adjacency matrix on the
//! vertex states `|a, 0, 0, 0>`.

mod bipartite;
mod gates;
mod layout;
mod state;
mod trotter;

pub use bipartite::{bipartite_coloring, DerivedColoring};
pub use gates::{
    apply_controlled_x, apply_exp_t, apply_exp_t_with, apply_phase_on_ancilla, apply_t,
    apply_two_qubit, apply_vc, apply_w, w_matrix, ExpTMethod,
};
pub use layout::RegisterLayout;
pub use state::CircuitState;
pub use trotter::{
    embed_vertex_state, restrict_to_vertices, trotter_evolve, verify_ham_action, TrotterPlan,
};

use crate::oracle::{Color, OracleHandle};

/// A colored oracle as seen by the circuit: `v_c` on raw name bits.
///
/// `lookup` does not count; [`apply_vc`] records one query per application.
pub trait ColoredOracle: Sync {
    fn name_width(&self) -> u32;
    fn lookup(&self, a: u64, c: Color) -> u64;
    fn record_query(&self);
    fn is_vertex(&self, a: u64) -> bool;
    fn queries(&self) -> u64;
}

impl ColoredOracle for OracleHandle {
    fn name_width(&self) -> u32 {
        OracleHandle::name_width(self)
    }

    fn lookup(&self, a: u64, c: Color) -> u64 {
        self.lookup_colored(a, c)
    }

    fn record_query(&self) {
        OracleHandle::record_query(self)
    }

    fn is_vertex(&self, a: u64) -> bool {
        let w = OracleHandle::name_width(self);
        a >> w == 0
            && self
                .graph()
                .vertex_named(crate::oracle::VertexName::raw(a, w))
                .is_some()
    }

    fn queries(&self) -> u64 {
        OracleHandle::queries(self)
    }
}
