use rand::{seq::SliceRandom, Rng};

use super::{Color, GluedTrees};
use crate::{Error, Result};

/// One color per edge id. Each even-column vertex injects letters into its
/// incident edges and each odd-column vertex injects digits, so no two
/// edges at a vertex share a color.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeColoring {
    colors: Vec<Color>,
}

impl EdgeColoring {
    pub fn assign<R: Rng + ?Sized>(graph: &GluedTrees, rng: &mut R) -> Result<Self> {
        let mut letter = vec![u8::MAX; graph.edges().len()];
        let mut digit = vec![u8::MAX; graph.edges().len()];
        for v in 0..graph.vertex_count() as u32 {
            let edges = graph.incident_edges(v);
            if edges.len() > 3 {
                return Err(Error::ColoringInconsistent(format!(
                    "vertex {v} has degree {}",
                    edges.len()
                )));
            }
            let mut symbols = [0u8, 1, 2];
            symbols.shuffle(rng);
            let slot = if graph.column(v) % 2 == 0 {
                &mut letter
            } else {
                &mut digit
            };
            for (&e, &s) in edges.iter().zip(&symbols) {
                slot[e as usize] = s;
            }
        }
        let colors = letter
            .iter()
            .zip(&digit)
            .enumerate()
            .map(|(e, (&l, &d))| {
                if l == u8::MAX || d == u8::MAX {
                    let (u, v) = graph.edges()[e];
                    Err(Error::ColoringInconsistent(format!(
                        "edge {u} -- {v} joins columns of equal parity"
                    )))
                } else {
                    Color::new(l, d)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeColoring { colors })
    }

    pub(crate) fn from_colors(graph: &GluedTrees, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != graph.edges().len() {
            return Err(Error::DimensionMismatch {
                expected: graph.edges().len(),
                got: colors.len(),
            });
        }
        let c = EdgeColoring { colors };
        c.validate(graph)?;
        Ok(c)
    }

    pub fn color(&self, edge: u32) -> Color {
        self.colors[edge as usize]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Checks that incident edges have distinct colors everywhere.
    pub fn validate(&self, graph: &GluedTrees) -> Result<()> {
        for v in 0..graph.vertex_count() as u32 {
            let mut seen = [false; Color::COUNT];
            for &e in graph.incident_edges(v) {
                let c = self.colors[e as usize].index();
                if seen[c] {
                    return Err(Error::ColoringInconsistent(format!(
                        "color {} repeats at vertex {v}",
                        self.colors[e as usize]
                    )));
                }
                seen[c] = true;
            }
        }
        Ok(())
    }
}
