use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Color, GluedTrees, VertexName};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplyMode {
    WithColors,
    NamesOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Neighbor {
    pub name: VertexName,
    pub color: Option<Color>,
}

/// Counted black-box access to a named graph. The counter is atomic so one
/// handle can be shared across worker threads.
#[derive(Debug)]
pub struct OracleHandle {
    graph: Arc<GluedTrees>,
    queries: AtomicU64,
}

impl OracleHandle {
    pub fn new(graph: Arc<GluedTrees>) -> Result<Self> {
        if graph.naming().is_none() {
            return Err(Error::Missing("names"));
        }
        Ok(OracleHandle {
            graph,
            queries: AtomicU64::new(0),
        })
    }

    pub fn graph(&self) -> &GluedTrees {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<GluedTrees> {
        Arc::clone(&self.graph)
    }

    pub fn name_width(&self) -> u32 {
        self.graph
            .naming()
            .expect("checked at construction")
            .width()
    }

    pub fn entrance_name(&self) -> VertexName {
        VertexName::zero(self.name_width())
    }

    pub fn exit_name(&self) -> VertexName {
        self.graph
            .name(self.graph.exit())
            .expect("checked at construction")
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub fn record_query(&self) {
        self.queries.fetch_add(1, Ordering::Relaxed);
    }

    /// `v_c(a)`: the neighbor of `a` along its color-`c` edge, or the
    /// reserved name when `a` names no vertex or has no such edge.
    pub fn query_colored(&self, a: VertexName, c: Color) -> Result<VertexName> {
        if self.graph.coloring().is_none() {
            return Err(Error::Missing("coloring"));
        }
        self.record_query();
        Ok(VertexName::raw(
            self.lookup_colored(a.bits(), c),
            self.name_width(),
        ))
    }

    /// Uncounted `v_c` on raw bits, for simulators that count separately.
    pub(crate) fn lookup_colored(&self, a: u64, c: Color) -> u64 {
        let w = self.name_width();
        let invalid = VertexName::mask(w);
        let (Some(naming), Some(coloring)) = (self.graph.naming(), self.graph.coloring()) else {
            return invalid;
        };
        let Some(v) = naming.vertex(VertexName::raw(a, w)) else {
            return invalid;
        };
        self.graph
            .neighbors(v)
            .iter()
            .zip(self.graph.incident_edges(v))
            .find(|&(_, &e)| coloring.color(e) == c)
            .map_or(invalid, |(&u, _)| naming.name(u).bits())
    }

    /// All neighbors of `a`, sorted by name. Empty when `a` names no vertex.
    pub fn query_neighbors(&self, a: VertexName, mode: ReplyMode) -> Vec<Neighbor> {
        self.record_query();
        let Some(v) = self.graph.vertex_named(a) else {
            return Vec::new();
        };
        let mut out: Vec<Neighbor> = self
            .graph
            .neighbors(v)
            .iter()
            .map(|&u| Neighbor {
                name: self.graph.name(u).expect("checked at construction"),
                color: match mode {
                    ReplyMode::WithColors => self.graph.edge_color(v, u),
                    ReplyMode::NamesOnly => None,
                },
            })
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{GraphKind, WidthPolicy};

    #[test]
    fn colored_oracle_is_an_involution() {
        let g = Arc::new(GluedTrees::standard(3, 4).unwrap());
        let h = OracleHandle::new(Arc::clone(&g)).unwrap();
        for v in 0..g.vertex_count() as u32 {
            let a = g.name(v).unwrap();
            for c in Color::all() {
                let b = h.query_colored(a, c).unwrap();
                if !b.is_invalid() {
                    assert_eq!(h.query_colored(b, c).unwrap(), a);
                }
            }
        }
        assert!(h.queries() > 0);
        let invalid = VertexName::invalid(h.name_width());
        assert!(h
            .query_colored(invalid, Color::all().next().unwrap())
            .unwrap()
            .is_invalid());
    }

    #[test]
    fn neighbors_sorted_and_counted() {
        let g = Arc::new(GluedTrees::standard(2, 1).unwrap());
        let h = OracleHandle::new(g).unwrap();
        let r = h.query_neighbors(h.entrance_name(), ReplyMode::NamesOnly);
        assert_eq!(r.len(), 2);
        assert!(r[0].name < r[1].name);
        assert!(r.iter().all(|nb| nb.color.is_none()));
        let r = h.query_neighbors(r[0].name, ReplyMode::WithColors);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|nb| nb.color.is_some()));
        assert_eq!(h.queries(), 2);
    }

    #[test]
    fn requires_names_and_coloring() {
        let g = GluedTrees::generate(GraphKind::RandomCycle, 2, 0).unwrap();
        assert!(OracleHandle::new(Arc::new(g.clone())).is_err());
        let named = g.with_names(0, WidthPolicy::Strict).unwrap();
        let h = OracleHandle::new(Arc::new(named)).unwrap();
        assert_eq!(
            h.query_colored(h.entrance_name(), Color::all().next().unwrap()),
            Err(Error::Missing("coloring"))
        );
    }
}
