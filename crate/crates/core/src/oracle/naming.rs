use std::collections::HashMap;

use rand::{seq::index, Rng};

use super::VertexName;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthPolicy {
    /// Exactly `2n` bits; fails when they cannot hold every vertex.
    Strict,
    /// `2n` bits, widened two bits at a time until every vertex fits.
    Fitting,
    Fixed(u32),
}

impl WidthPolicy {
    pub fn width(self, n: u32, vertices: u64) -> Result<u32> {
        let w = match self {
            WidthPolicy::Strict => 2 * n,
            WidthPolicy::Fitting => fitting_name_width(n, vertices),
            WidthPolicy::Fixed(w) => w,
        };
        if w == 0 || w > VertexName::MAX_WIDTH {
            return Err(Error::param(
                "width",
                format!("{w} not in 1..={}", VertexName::MAX_WIDTH),
            ));
        }
        Ok(w)
    }
}

/// Smallest even width `>= 2n` whose strings, minus the reserved one, cover
/// `vertices` names.
pub fn fitting_name_width(n: u32, vertices: u64) -> u32 {
    let mut w = (2 * n).max(2);
    while w < VertexName::MAX_WIDTH && (1u64 << w) - 1 < vertices {
        w += 2;
    }
    w
}

/// Vertex names. Vertex `0` (the entrance) is named `00...0`; the rest are a
/// uniformly random injection into `1..2^w - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Naming {
    width: u32,
    names: Vec<u64>,
    lookup: HashMap<u64, u32>,
}

impl Naming {
    pub fn assign<R: Rng + ?Sized>(vertices: usize, width: u32, rng: &mut R) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::param("vertices", "empty graph"));
        }
        let pool = (1u64 << width) - 2;
        let needed = vertices as u64 - 1;
        if needed > pool {
            return Err(Error::NameSpaceExhausted {
                needed,
                available: pool,
                width,
            });
        }
        let mut names = Vec::with_capacity(vertices);
        names.push(0);
        if pool <= 4 * needed.max(1) {
            names.extend(
                index::sample(rng, pool as usize, needed as usize)
                    .into_iter()
                    .map(|i| i as u64 + 1),
            );
        } else {
            let mut seen = std::collections::HashSet::with_capacity(vertices);
            while names.len() < vertices {
                let s = rng.gen_range(1..=pool);
                if seen.insert(s) {
                    names.push(s);
                }
            }
        }
        Self::from_names(width, names)
    }

    pub(crate) fn from_names(width: u32, names: Vec<u64>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(names.len());
        let invalid = VertexName::mask(width);
        for (v, &s) in names.iter().enumerate() {
            if s >= invalid {
                return Err(Error::param(
                    "names",
                    format!("name {s:#b} of vertex {v} is reserved or too wide"),
                ));
            }
            if lookup.insert(s, v as u32).is_some() {
                return Err(Error::param("names", format!("name {s:#b} used twice")));
            }
        }
        Ok(Naming {
            width,
            names,
            lookup,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn name(&self, v: u32) -> VertexName {
        VertexName::raw(self.names[v as usize], self.width)
    }

    pub fn vertex(&self, name: VertexName) -> Option<u32> {
        if name.width() != self.width {
            return None;
        }
        self.lookup.get(&name.bits()).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{GluedTrees, GraphKind};
    use crate::rng::{stream, Artifact};

    #[test]
    fn widths() {
        assert_eq!(fitting_name_width(1, 6), 4);
        assert_eq!(fitting_name_width(1, 4), 4);
        assert_eq!(fitting_name_width(2, 14), 4);
        assert_eq!(fitting_name_width(5, 126), 10);
        assert_eq!(WidthPolicy::Strict.width(1, 6).unwrap(), 2);
    }

    #[test]
    fn strict_exhaustion_is_an_error() {
        let g = GluedTrees::generate(GraphKind::RandomCycle, 1, 0).unwrap();
        let err = g.with_names(0, WidthPolicy::Strict).unwrap_err();
        assert!(matches!(
            err,
            Error::NameSpaceExhausted {
                needed: 5,
                available: 2,
                width: 2
            }
        ));
    }

    #[test]
    fn names_are_distinct_and_unreserved() {
        for (verts, width) in [(14usize, 4u32), (62, 8), (30, 10)] {
            let nm = Naming::assign(verts, width, &mut stream(9, Artifact::Names)).unwrap();
            assert_eq!(nm.name(0), VertexName::zero(width));
            for v in 0..verts as u32 {
                let name = nm.name(v);
                assert!(!name.is_invalid());
                assert_eq!(nm.vertex(name), Some(v));
            }
            assert_eq!(nm.vertex(VertexName::invalid(width)), None);
        }
    }

    #[test]
    fn full_pool_is_a_permutation() {
        let nm = Naming::assign(15, 4, &mut stream(1, Artifact::Names)).unwrap();
        let mut all: Vec<u64> = (0..15).map(|v| nm.name(v).bits()).collect();
        all.sort();
        assert_eq!(all, (0..15).collect::<Vec<_>>());
    }
}
