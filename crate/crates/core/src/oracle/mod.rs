//! Glued-trees graphs behind a black-box oracle.
//!
//! A graph is generated from a seed (tree wiring plus the random cycle that
//! joins the leaves), then given random `2n`-bit vertex names and a
//! nine-color edge coloring. Algorithms only see it through an
//! [`OracleHandle`], which counts every query.

mod coloring;
mod format;
mod graph;
mod handle;
mod hypercube;
mod lazy;
mod name;
mod naming;

pub use coloring::EdgeColoring;
pub use format::{from_text, to_text, FORMAT_VERSION};
pub use graph::{GluedTrees, GraphKind, SeedRecord, DEFAULT_VERTEX_CAP};
pub use handle::{Neighbor, OracleHandle, ReplyMode};
pub use hypercube::HypercubeOracle;
pub use lazy::LazyGluedTrees;
pub use name::{Color, VertexName};
pub use naming::{fitting_name_width, Naming, WidthPolicy};

/// Read-only structural access shared by explicit and lazily sampled graphs.
///
/// Vertex ids are opaque; `neighbors` may reveal randomness on first use
/// for lazily sampled graphs, hence `&mut self`.
pub trait GraphView {
    fn depth(&self) -> u32;
    fn entrance(&self) -> u64;
    fn exit(&self) -> u64;
    fn column_of(&self, v: u64) -> u32;
    fn neighbors_of(&mut self, v: u64) -> Vec<u64>;
}

/// A graph whose vertices carry names, served to query games.
pub trait NamedGraph: GraphView {
    fn name_width(&self) -> u32;
    /// Vertex carrying `name`, or `None` for strings that name nothing.
    fn resolve(&mut self, name: VertexName) -> Option<u64>;
    fn name_of_vertex(&mut self, v: u64) -> VertexName;
    fn edge_color(&mut self, u: u64, v: u64) -> Color;
}
