use std::collections::{HashMap, VecDeque};

use super::ColoredOracle;
use crate::oracle::{Color, EdgeColoring, GluedTrees, OracleHandle, ReplyMode, VertexName};
use crate::{Error, Result};

/// An edge coloring built from an uncolored oracle and a parity bit.
///
/// Each vertex orders its neighbors by name; the directed edge `u -> v` gets
/// color `idx_u(v)`. The undirected edge `{u, v}` with `u` on side 0 gets
/// `(idx_v(u), idx_u(v))`, which is `(incoming, outgoing)` seen from `u` and
/// `(outgoing, incoming)` seen from `v`, so both endpoints agree.
#[derive(Debug)]
pub struct DerivedColoring<'o> {
    oracle: &'o OracleHandle,
    width: u32,
    side: HashMap<u64, bool>,
    lists: HashMap<u64, Vec<u64>>,
}

/// Explore from the entrance, which is side 0. Each query hop flips the
/// parity bit; a vertex reached with both parities is an odd cycle.
pub fn bipartite_coloring(oracle: &OracleHandle) -> Result<DerivedColoring<'_>> {
    let width = oracle.name_width();
    let start = oracle.entrance_name().bits();
    let mut side = HashMap::from([(start, false)]);
    let mut lists = HashMap::new();
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let parity = side[&u];
        let list: Vec<u64> = oracle
            .query_neighbors(VertexName::raw(u, width), ReplyMode::NamesOnly)
            .into_iter()
            .map(|nb| nb.name.bits())
            .collect();
        if list.len() > 3 {
            return Err(Error::param(
                "graph",
                format!("degree {} exceeds 3", list.len()),
            ));
        }
        for &v in &list {
            match side.get(&v) {
                Some(&p) if p == parity => {
                    return Err(Error::NotBipartite(
                        VertexName::raw(u, width).to_string(),
                        VertexName::raw(v, width).to_string(),
                    ))
                }
                Some(_) => {}
                None => {
                    side.insert(v, !parity);
                    queue.push_back(v);
                }
            }
        }
        lists.insert(u, list);
    }
    Ok(DerivedColoring {
        oracle,
        width,
        side,
        lists,
    })
}

impl DerivedColoring<'_> {
    pub fn side(&self, a: VertexName) -> Option<bool> {
        self.side.get(&a.bits()).copied()
    }

    fn index_of(&self, u: u64, v: u64) -> Option<usize> {
        self.lists.get(&u)?.iter().position(|&x| x == v)
    }

    /// Color of the undirected edge `{u, v}` computed from `u`'s side.
    pub fn color_from(&self, u: VertexName, v: VertexName) -> Option<Color> {
        let (u, v) = (u.bits(), v.bits());
        let (out, inc) = (self.index_of(u, v)?, self.index_of(v, u)?);
        let (letter, digit) = if self.side[&u] {
            (out, inc)
        } else {
            (inc, out)
        };
        Color::new(letter as u8, digit as u8).ok()
    }

    /// Every vertex sees distinct colors, `v_c` is an involution, both
    /// endpoints agree, and colors cover each neighbor list exactly.
    pub fn check_consistency(&self) -> Result<()> {
        for (&u, list) in &self.lists {
            let mut seen = [false; Color::COUNT];
            for &v in list {
                let c = self.color_from(
                    VertexName::raw(u, self.width),
                    VertexName::raw(v, self.width),
                );
                let c2 = self.color_from(
                    VertexName::raw(v, self.width),
                    VertexName::raw(u, self.width),
                );
                let (Some(c), true) = (c, c == c2) else {
                    return Err(Error::ColoringInconsistent(format!(
                        "endpoints disagree on {u:#x}-{v:#x}"
                    )));
                };
                if std::mem::replace(&mut seen[c.index()], true) {
                    return Err(Error::ColoringInconsistent(format!(
                        "color {c} repeated at {u:#x}"
                    )));
                }
                if self.lookup(u, c) != v || self.lookup(v, c) != u {
                    return Err(Error::ColoringInconsistent(format!(
                        "v_{c} not an involution at {u:#x}"
                    )));
                }
            }
            let mapped = Color::all()
                .filter(|&c| self.lookup(u, c) != VertexName::mask(self.width))
                .count();
            if mapped != list.len() {
                return Err(Error::ColoringInconsistent(format!(
                    "{mapped} colors for {} edges at {u:#x}",
                    list.len()
                )));
            }
        }
        Ok(())
    }

    /// The same coloring as an [`EdgeColoring`] of `graph`'s edge list.
    pub fn to_edge_coloring(&self, graph: &GluedTrees) -> Result<EdgeColoring> {
        let colors = graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                self.color_from(graph.name(u)?, graph.name(v)?)
                    .ok_or_else(|| {
                        Error::ColoringInconsistent(format!("edge {u}-{v} not explored"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeColoring::from_colors(graph, colors)
    }
}

impl ColoredOracle for DerivedColoring<'_> {
    fn name_width(&self) -> u32 {
        self.width
    }

    fn lookup(&self, a: u64, c: Color) -> u64 {
        let invalid = VertexName::mask(self.width);
        let (Some(&side), Some(list)) = (self.side.get(&a), self.lists.get(&a)) else {
            return invalid;
        };
        let (out, inc) = if side {
            (c.letter(), c.digit())
        } else {
            (c.digit(), c.letter())
        };
        match list.get(out as usize) {
            Some(&v) if self.index_of(v, a) == Some(inc as usize) => v,
            _ => invalid,
        }
    }

    fn record_query(&self) {
        self.oracle.record_query()
    }

    fn is_vertex(&self, a: u64) -> bool {
        self.side.contains_key(&a)
    }

    fn queries(&self) -> u64 {
        self.oracle.queries()
    }
}
