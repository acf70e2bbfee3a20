use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use super::{naming::Naming, VertexName};
use crate::rng::{self, Artifact};
use crate::{Error, Result};

/// The `n`-cube behind a names-only oracle. Vertices are bit vectors; the
/// entrance is a random vertex and the exit is its antipode.
#[derive(Debug)]
pub struct HypercubeOracle {
    n: u32,
    naming: Naming,
    entrance: u64,
    queries: AtomicU64,
}

impl HypercubeOracle {
    pub fn generate(n: u32, seed: u64) -> Result<Self> {
        if n == 0 || n > 24 {
            return Err(Error::param("n", format!("{n} not in 1..=24")));
        }
        let count = 1usize << n;
        let mut rng = rng::stream(seed, Artifact::Names);
        let entrance = rng.gen_range(0..count as u64);
        // Naming gives vertex 0 the zero name; relabel so that slot 0 is the
        // entrance and every other vertex gets a random nonzero name.
        let width = (2 * n).max(2);
        let raw = Naming::assign(count, width, &mut rng)?;
        let mut names = vec![0u64; count];
        for slot in 0..count as u64 {
            names[(slot ^ entrance) as usize] = raw.name(slot as u32).bits();
        }
        let naming = Naming::from_names(width, names)?;
        Ok(HypercubeOracle {
            n,
            naming,
            entrance,
            queries: AtomicU64::new(0),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn entrance_name(&self) -> VertexName {
        self.naming.name(self.entrance as u32)
    }

    pub fn exit_name(&self) -> VertexName {
        self.naming
            .name((self.entrance ^ VertexName::mask(self.n)) as u32)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn neighbors(&self, a: VertexName) -> Vec<VertexName> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let Some(v) = self.naming.vertex(a) else {
            return Vec::new();
        };
        let mut out: Vec<VertexName> = (0..self.n)
            .map(|b| self.naming.name(v ^ (1 << b)))
            .collect();
        out.sort();
        out
    }

    /// Hamming distance between the vertices behind two names (test aid).
    pub fn distance(&self, a: VertexName, b: VertexName) -> Option<u32> {
        Some((self.naming.vertex(a)? ^ self.naming.vertex(b)?).count_ones())
    }

    pub fn name_map(&self) -> HashMap<u64, u32> {
        (0..1u32 << self.n)
            .map(|v| (self.naming.name(v).bits(), v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entrance_and_exit_are_antipodal() {
        for seed in 0..5 {
            let h = HypercubeOracle::generate(6, seed).unwrap();
            assert_eq!(h.distance(h.entrance_name(), h.exit_name()), Some(6));
            let nb = h.neighbors(h.entrance_name());
            assert_eq!(nb.len(), 6);
            assert!(nb
                .iter()
                .all(|&x| h.distance(x, h.entrance_name()) == Some(1)));
            assert_eq!(h.queries(), 1);
        }
    }
}
