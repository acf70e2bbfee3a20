use num_complex::Complex64;

use super::{
    apply_exp_t_with, apply_t, apply_vc, CircuitState, ColoredOracle, ExpTMethod, RegisterLayout,
};
use crate::oracle::{Color, GluedTrees, VertexName};
use crate::walk::{Basis, StateVector};
use crate::{Error, Result};

/// `(prod_c V_c e^{-iT t/j} V_c)^j`, colors applied in `colors` order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrotterPlan {
    pub time: f64,
    pub steps: u64,
    pub colors: Vec<Color>,
    pub exp_t: ExpTMethod,
}

impl TrotterPlan {
    /// Ascending color order, gate-level `e^{-iTt}`.
    pub fn new(time: f64, steps: u64) -> Self {
        TrotterPlan {
            time,
            steps,
            colors: Color::all().collect(),
            exp_t: ExpTMethod::Gates,
        }
    }

    pub fn with_exp_t(mut self, method: ExpTMethod) -> Self {
        self.exp_t = method;
        self
    }

    pub fn step_time(&self) -> f64 {
        self.time / self.steps as f64
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 1 {
            return Err(Error::param("steps", "j must be at least 1"));
        }
        if !self.time.is_finite() {
            return Err(Error::param("time", "not finite"));
        }
        let mut seen = [false; Color::COUNT];
        for c in &self.colors {
            if std::mem::replace(&mut seen[c.index()], true) {
                return Err(Error::param("colors", format!("{c} repeated")));
            }
        }
        Ok(())
    }
}

/// One `V_c e^{-iTs} V_c` block.
fn block<O: ColoredOracle + ?Sized>(
    state: &mut CircuitState,
    oracle: &O,
    c: Color,
    s: f64,
    method: ExpTMethod,
) {
    apply_vc(state, oracle, c);
    apply_exp_t_with(state, s, method);
    apply_vc(state, oracle, c);
}

/// First-order product formula for `H = sum_c V_c T V_c`, the unweighted
/// adjacency matrix. Evolving `A` for time `t` models `gamma * A` for `t / gamma`.
pub fn trotter_evolve<O: ColoredOracle + ?Sized>(
    oracle: &O,
    psi0: &CircuitState,
    plan: &TrotterPlan,
) -> Result<CircuitState> {
    plan.validate()?;
    let layout = psi0.layout();
    if layout.width() != oracle.name_width() {
        return Err(Error::DimensionMismatch {
            expected: oracle.name_width() as usize,
            got: layout.width() as usize,
        });
    }
    if psi0.weight_outside_vertices(|a| oracle.is_vertex(a)) > 0.0 {
        return Err(Error::param(
            "psi0",
            "not supported on vertex states |a,0,0>",
        ));
    }
    let mut psi = psi0.clone();
    let s = plan.step_time();
    for _ in 0..plan.steps {
        for &c in &plan.colors {
            block(&mut psi, oracle, c, s, plan.exp_t);
        }
    }
    Ok(psi)
}

/// Checks `H|a,0,0> = sum_{c : v_c(a) in G} |v_c(a),0,0>` two ways and returns
/// the neighbor names in color order.
///
/// The algebraic route applies `V_c T V_c` per color. The generator route
/// takes one product step of length `delta` and forms `i(psi(delta) - psi0)/delta`.
pub fn verify_ham_action<O: ColoredOracle + ?Sized>(
    oracle: &O,
    a: VertexName,
) -> Result<Vec<VertexName>> {
    const DELTA: f64 = 1e-6;
    const TOL: f64 = 1e-5;
    let w = oracle.name_width();
    if a.width() != w || !oracle.is_vertex(a.bits()) {
        return Err(Error::param("a", format!("{a} is not a vertex")));
    }
    let layout = RegisterLayout::new(w)?;
    let psi0 = CircuitState::vertex(layout, a.bits());

    let mut neighbors = Vec::new();
    for c in Color::all() {
        let mut s = psi0.clone();
        apply_vc(&mut s, oracle, c);
        apply_t(&mut s);
        apply_vc(&mut s, oracle, c);
        let v = oracle.lookup(a.bits(), c);
        let want = if v == layout.name_mask() {
            CircuitState::zero(layout)
        } else {
            neighbors.push(VertexName::raw(v, w));
            CircuitState::vertex(layout, v)
        };
        if s != want {
            return Err(Error::ColoringInconsistent(format!(
                "V_c T V_c |{a},0,0> wrong for color {c}"
            )));
        }
    }

    let stepped = trotter_evolve(oracle, &psi0, &TrotterPlan::new(DELTA, 1))?;
    let i_over_delta = Complex64::new(0.0, 1.0 / DELTA);
    let generator = CircuitState::from_amplitudes(
        layout,
        stepped
            .iter()
            .chain(psi0.iter().map(|(k, z)| (k, -z)))
            .map(|(k, z)| (k, z * i_over_delta)),
    );
    for (k, z) in generator.iter() {
        let (b, _, _, _) = layout.split(k);
        let expected =
            if k == layout.index(b, 0, false, false) && neighbors.iter().any(|v| v.bits() == b) {
                1.0
            } else {
                0.0
            };
        if (z - expected).norm() > TOL {
            return Err(Error::Numerical(format!(
                "generator component {k:#x} = {z}, expected {expected}"
            )));
        }
    }
    for v in &neighbors {
        if (generator.vertex_amplitude(v.bits()) - 1.0).norm() > TOL {
            return Err(Error::Numerical(format!("generator misses neighbor {v}")));
        }
    }
    Ok(neighbors)
}

/// `|psi> -> sum_v psi_v |name(v), 0, 0, 0>`.
pub fn embed_vertex_state(graph: &GluedTrees, psi: &StateVector) -> Result<CircuitState> {
    if psi.basis != Basis::Vertices || psi.dim() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            got: psi.dim(),
        });
    }
    let naming = graph.naming().ok_or(Error::Missing("names"))?;
    let layout = RegisterLayout::new(naming.width())?;
    Ok(CircuitState::from_amplitudes(
        layout,
        psi.amplitudes.iter().enumerate().map(|(v, &z)| {
            (
                layout.index(naming.name(v as u32).bits(), 0, false, false),
                z,
            )
        }),
    ))
}

/// Vertex-basis amplitudes of a circuit state, ignoring everything else.
pub fn restrict_to_vertices(graph: &GluedTrees, state: &CircuitState) -> Result<StateVector> {
    let naming = graph.naming().ok_or(Error::Missing("names"))?;
    let amps = (0..graph.vertex_count() as u32)
        .map(|v| state.vertex_amplitude(naming.name(v).bits()))
        .collect();
    Ok(StateVector::new(Basis::Vertices, amps))
}
