use std::ops::Range;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{
    coloring::EdgeColoring,
    naming::{Naming, WidthPolicy},
    Color, GraphView, NamedGraph, VertexName,
};
use crate::rng::{self, Artifact};
use crate::{Error, Result};

/// Refuse to materialize graphs larger than this unless asked explicitly.
pub const DEFAULT_VERTEX_CAP: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    /// Two depth-`n` trees whose leaves are joined by a random cycle that
    /// alternates between the two sides; columns `0..=2n+1`.
    RandomCycle,
    /// Two depth-`n` trees sharing their leaves; columns `0..=2n`.
    Identified,
}

impl GraphKind {
    pub fn label(self) -> &'static str {
        match self {
            GraphKind::RandomCycle => "random-cycle",
            GraphKind::Identified => "identified",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "random-cycle" => Ok(GraphKind::RandomCycle),
            "identified" => Ok(GraphKind::Identified),
            _ => Err(Error::Unknown {
                kind: "graph kind",
                value: s.into(),
            }),
        }
    }

    pub fn column_count(self, n: u32) -> u32 {
        match self {
            GraphKind::RandomCycle => 2 * n + 2,
            GraphKind::Identified => 2 * n + 1,
        }
    }

    pub fn column_size(self, n: u32, j: u32) -> u64 {
        let last = self.column_count(n) - 1;
        1u64 << j.min(last - j)
    }

    pub fn vertex_count(self, n: u32) -> u64 {
        (0..self.column_count(n))
            .map(|j| self.column_size(n, j))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub graph: u64,
    pub names: Option<u64>,
    pub coloring: Option<u64>,
}

/// An explicit glued-trees graph. Vertex ids are contiguous by column, so
/// the entrance is `0` and the exit is the last id.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedTrees {
    n: u32,
    kind: GraphKind,
    column_start: Vec<u32>,
    edges: Vec<(u32, u32)>,
    adj: Vec<[u32; 3]>,
    adj_edge: Vec<[u32; 3]>,
    degree: Vec<u8>,
    naming: Option<Naming>,
    coloring: Option<EdgeColoring>,
    seeds: SeedRecord,
}

impl GluedTrees {
    pub fn generate(kind: GraphKind, n: u32, seed: u64) -> Result<Self> {
        Self::generate_capped(kind, n, seed, DEFAULT_VERTEX_CAP)
    }

    pub fn generate_capped(kind: GraphKind, n: u32, seed: u64, cap: u64) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::param("n", format!("{n} not in 1..=30")));
        }
        let vertices = kind.vertex_count(n);
        if vertices > cap {
            return Err(Error::VertexCap { n, vertices, cap });
        }
        let columns = kind.column_count(n);
        let mut column_start = Vec::with_capacity(columns as usize + 1);
        let mut acc = 0u32;
        for j in 0..columns {
            column_start.push(acc);
            acc += kind.column_size(n, j) as u32;
        }
        column_start.push(acc);

        let id = |j: u32, i: u32| column_start[j as usize] + i;
        let mut edges = Vec::with_capacity(vertices as usize + 2);
        let leaf_col = n;
        for j in 0..leaf_col {
            for i in 0..(1u32 << j) {
                edges.push((id(j, i), id(j + 1, 2 * i)));
                edges.push((id(j, i), id(j + 1, 2 * i + 1)));
            }
        }
        let right_leaf_col = match kind {
            GraphKind::RandomCycle => {
                let m = 1u32 << n;
                let mut rng = rng::stream(seed, Artifact::Graph);
                let mut left: Vec<u32> = (0..m).collect();
                let mut right: Vec<u32> = (0..m).collect();
                left.shuffle(&mut rng);
                right.shuffle(&mut rng);
                for k in 0..m as usize {
                    let next = (k + 1) % m as usize;
                    edges.push((id(n, left[k]), id(n + 1, right[k])));
                    edges.push((id(n + 1, right[k]), id(n, left[next])));
                }
                n + 1
            }
            GraphKind::Identified => n,
        };
        for j in right_leaf_col + 1..columns {
            for i in 0..(1u32 << (columns - 1 - j)) {
                edges.push((id(j, i), id(j - 1, 2 * i)));
                edges.push((id(j, i), id(j - 1, 2 * i + 1)));
            }
        }
        let mut g = Self::from_parts(n, kind, edges)?;
        g.seeds = SeedRecord {
            graph: seed,
            names: None,
            coloring: None,
        };
        Ok(g)
    }

    /// Rebuilds adjacency from an edge list in its given order.
    pub(crate) fn from_parts(n: u32, kind: GraphKind, edges: Vec<(u32, u32)>) -> Result<Self> {
        let columns = kind.column_count(n);
        let mut column_start = Vec::with_capacity(columns as usize + 1);
        let mut acc = 0u32;
        for j in 0..columns {
            column_start.push(acc);
            acc += kind.column_size(n, j) as u32;
        }
        column_start.push(acc);
        let count = acc as usize;
        let mut adj = vec![[NONE; 3]; count];
        let mut adj_edge = vec![[NONE; 3]; count];
        let mut degree = vec![0u8; count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for (a, b) in [(u, v), (v, u)] {
                let a = a as usize;
                if a >= count || b as usize >= count || u == v {
                    return Err(Error::param("edges", format!("bad edge ({u}, {v})")));
                }
                let d = degree[a] as usize;
                if d == 3 {
                    return Err(Error::param(
                        "edges",
                        format!("vertex {a} has degree above 3"),
                    ));
                }
                if adj[a][..d].contains(&b) {
                    return Err(Error::param("edges", format!("duplicate edge ({u}, {v})")));
                }
                adj[a][d] = b;
                adj_edge[a][d] = e as u32;
                degree[a] += 1;
            }
        }
        Ok(GluedTrees {
            n,
            kind,
            column_start,
            edges,
            adj,
            adj_edge,
            degree,
            naming: None,
            coloring: None,
            seeds: SeedRecord {
                graph: 0,
                names: None,
                coloring: None,
            },
        })
    }

    /// Random-cycle graph with names (width bumped if `2n` bits cannot hold
    /// them) and a coloring, all streams derived from `seed`.
    pub fn standard(n: u32, seed: u64) -> Result<Self> {
        Self::generate(GraphKind::RandomCycle, n, seed)?
            .with_names(seed, WidthPolicy::Fitting)?
            .with_coloring(seed)
    }

    pub fn with_names(mut self, seed: u64, policy: WidthPolicy) -> Result<Self> {
        let width = policy.width(self.n, self.vertex_count() as u64)?;
        let mut rng = rng::stream(seed, Artifact::Names);
        self.naming = Some(Naming::assign(self.vertex_count(), width, &mut rng)?);
        self.seeds.names = Some(seed);
        Ok(self)
    }

    pub fn with_coloring(mut self, seed: u64) -> Result<Self> {
        let mut rng = rng::stream(seed, Artifact::Coloring);
        self.coloring = Some(EdgeColoring::assign(&self, &mut rng)?);
        self.seeds.coloring = Some(seed);
        Ok(self)
    }

    /// Replace the coloring with an explicit one; it must be proper.
    pub fn with_edge_coloring(mut self, coloring: EdgeColoring) -> Result<Self> {
        coloring.validate(&self)?;
        self.coloring = Some(coloring);
        self.seeds.coloring = None;
        Ok(self)
    }

    pub(crate) fn set_naming(&mut self, naming: Naming) {
        self.naming = Some(naming);
    }

    pub(crate) fn set_coloring(&mut self, coloring: EdgeColoring) {
        self.coloring = Some(coloring);
    }

    pub(crate) fn set_seeds(&mut self, seeds: SeedRecord) {
        self.seeds = seeds;
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn seeds(&self) -> SeedRecord {
        self.seeds
    }

    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }

    pub fn column_count(&self) -> u32 {
        self.column_start.len() as u32 - 1
    }

    pub fn column_range(&self, j: u32) -> Range<u32> {
        self.column_start[j as usize]..self.column_start[j as usize + 1]
    }

    pub fn column(&self, v: u32) -> u32 {
        (self.column_start.partition_point(|&s| s <= v) - 1) as u32
    }

    pub fn entrance(&self) -> u32 {
        0
    }

    pub fn exit(&self) -> u32 {
        self.vertex_count() as u32 - 1
    }

    pub fn degree(&self, v: u32) -> usize {
        self.degree[v as usize] as usize
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize][..self.degree(v)]
    }

    /// Edge ids incident to `v`, aligned with [`neighbors`](Self::neighbors).
    pub fn incident_edges(&self, v: u32) -> &[u32] {
        &self.adj_edge[v as usize][..self.degree(v)]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_between(&self, u: u32, v: u32) -> Option<u32> {
        let pos = self.neighbors(u).iter().position(|&w| w == v)?;
        Some(self.incident_edges(u)[pos])
    }

    pub fn naming(&self) -> Option<&Naming> {
        self.naming.as_ref()
    }

    pub fn coloring(&self) -> Option<&EdgeColoring> {
        self.coloring.as_ref()
    }

    pub fn name(&self, v: u32) -> Result<VertexName> {
        Ok(self.naming.as_ref().ok_or(Error::Missing("names"))?.name(v))
    }

    pub fn vertex_named(&self, name: VertexName) -> Option<u32> {
        self.naming.as_ref()?.vertex(name)
    }

    pub fn edge_color(&self, u: u32, v: u32) -> Option<Color> {
        Some(self.coloring.as_ref()?.color(self.edge_between(u, v)?))
    }

    /// Edges of the leaf-joining cycle (empty for the identified kind).
    pub fn cycle_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.n;
        let cyc = self.kind == GraphKind::RandomCycle;
        self.edges.iter().copied().filter(move |&(u, v)| {
            cyc && {
                let (a, b) = (self.column(u), self.column(v));
                a.min(b) == n && a.max(b) == n + 1
            }
        })
    }
}

impl GraphView for &GluedTrees {
    fn depth(&self) -> u32 {
        self.n
    }

    fn entrance(&self) -> u64 {
        GluedTrees::entrance(self) as u64
    }

    fn exit(&self) -> u64 {
        GluedTrees::exit(self) as u64
    }

    fn column_of(&self, v: u64) -> u32 {
        self.column(v as u32)
    }

    fn neighbors_of(&mut self, v: u64) -> Vec<u64> {
        self.neighbors(v as u32).iter().map(|&w| w as u64).collect()
    }
}

impl NamedGraph for &GluedTrees {
    fn name_width(&self) -> u32 {
        self.naming.as_ref().map_or(2 * self.n, |nm| nm.width())
    }

    fn resolve(&mut self, name: VertexName) -> Option<u64> {
        self.vertex_named(name).map(u64::from)
    }

    fn name_of_vertex(&mut self, v: u64) -> VertexName {
        self.naming.as_ref().expect("named graph").name(v as u32)
    }

    fn edge_color(&mut self, u: u64, v: u64) -> Color {
        GluedTrees::edge_color(self, u as u32, v as u32).expect("colored graph")
    }
}
