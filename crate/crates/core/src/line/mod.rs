//! Analytic tools for walks on a line.
//!
//! Bessel functions give the exact propagator of the free infinite line;
//! images turn it into the finite-segment propagator. A single modified
//! bond is treated as a scatterer, and the column chain of the glued-trees
//! graph (a segment with one modified bond in the middle) is diagonalized
//! through its quantization condition.

mod bessel;
mod propagator;
mod scattering;
mod spectrum;

pub use bessel::{bessel_j, bessel_j_integral, bessel_j_orders};
pub use propagator::{
    finite_line, finite_line_auto, infinite_line, infinite_line_by_quadrature, wavefront_profile,
    ImageRange, WavefrontProfile,
};
pub use scattering::{
    reflection, transmission, transmission_probability, wavepacket_scatter, PacketOutcome,
    PacketSpec,
};
pub use spectrum::{
    min_gap, quantization_lhs, quantization_roots, Branch, Eigenstate, GapReport, SpectralReport,
    StateKind,
};
