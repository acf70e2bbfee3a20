use std::collections::BTreeMap;

use num_complex::Complex64;

use super::RegisterLayout;
use crate::{Error, Result};

/// Amplitudes below this magnitude are dropped after each gate.
pub(crate) const PRUNE: f64 = 1e-15;

/// Sparse state over the computational basis of a [`RegisterLayout`].
/// Ordered storage keeps every traversal deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitState {
    layout: RegisterLayout,
    amps: BTreeMap<u64, Complex64>,
}

impl CircuitState {
    pub fn zero(layout: RegisterLayout) -> Self {
        CircuitState {
            layout,
            amps: BTreeMap::new(),
        }
    }

    pub fn basis(layout: RegisterLayout, idx: u64) -> Self {
        let mut s = Self::zero(layout);
        s.amps.insert(idx, Complex64::new(1.0, 0.0));
        s
    }

    /// `|a, 0, 0, 0>`.
    pub fn vertex(layout: RegisterLayout, a: u64) -> Self {
        Self::basis(layout, layout.index(a, 0, false, false))
    }

    pub fn from_amplitudes(
        layout: RegisterLayout,
        amps: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Self {
        let mut s = Self::zero(layout);
        for (k, v) in amps {
            *s.amps.entry(k).or_default() += v;
        }
        s.prune();
        s
    }

    /// Dense vector over all `2^qubits` basis states (small layouts only).
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        let q = self.layout.qubits();
        if q > 22 {
            return Err(Error::param(
                "layout",
                format!("{q} qubits is too many for a dense vector"),
            ));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << q];
        for (&k, &a) in &self.amps {
            v[k as usize] = a;
        }
        Ok(v)
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitude(&self, idx: u64) -> Complex64 {
        self.amps.get(&idx).copied().unwrap_or_default()
    }

    pub fn vertex_amplitude(&self, a: u64) -> Complex64 {
        self.amplitude(self.layout.index(a, 0, false, false))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn distance(&self, other: &CircuitState) -> f64 {
        let mut s = 0.0;
        for (k, v) in &self.amps {
            s += (v - other.amplitude(*k)).norm_sqr();
        }
        for (k, v) in &other.amps {
            if !self.amps.contains_key(k) {
                s += v.norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Probability outside `span{|a,0,0,0> : is_vertex(a)}`.
    pub fn weight_outside_vertices(&self, is_vertex: impl Fn(u64) -> bool) -> f64 {
        self.amps
            .iter()
            .filter(|(&k, _)| {
                let (a, b, r, anc) = self.layout.split(k);
                b != 0 || r || anc || !is_vertex(a)
            })
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    pub(crate) fn map_mut(&mut self) -> &mut BTreeMap<u64, Complex64> {
        &mut self.amps
    }

    pub(crate) fn replace(&mut self, amps: BTreeMap<u64, Complex64>) {
        self.amps = amps;
    }

    pub(crate) fn prune(&mut self) {
        self.amps.retain(|_, z| z.norm() > PRUNE);
    }
}
