use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::oracle::{HypercubeOracle, OracleHandle, ReplyMode, VertexName};
use crate::{Error, Result};

/// Names-only neighbor access. Every call is one counted query.
pub trait NeighborOracle {
    fn entrance_name(&self) -> VertexName;
    fn neighbor_names(&self, a: VertexName) -> Vec<VertexName>;
    fn query_count(&self) -> u64;
}

impl NeighborOracle for OracleHandle {
    fn entrance_name(&self) -> VertexName {
        OracleHandle::entrance_name(self)
    }

    fn neighbor_names(&self, a: VertexName) -> Vec<VertexName> {
        self.query_neighbors(a, ReplyMode::NamesOnly)
            .into_iter()
            .map(|nb| nb.name)
            .collect()
    }

    fn query_count(&self) -> u64 {
        self.queries()
    }
}

impl NeighborOracle for HypercubeOracle {
    fn entrance_name(&self) -> VertexName {
        HypercubeOracle::entrance_name(self)
    }

    fn neighbor_names(&self, a: VertexName) -> Vec<VertexName> {
        self.neighbors(a)
    }

    fn query_count(&self) -> u64 {
        self.queries()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraversalOutcome {
    pub exit: Option<VertexName>,
    pub queries: u64,
    pub exhausted: bool,
}

/// What the walker wants next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkerStep {
    Query(VertexName),
    Found(VertexName),
    Stuck,
}

/// Degree-guided traversal of `G_n` driven one reply at a time.
///
/// The walker goes down the left tree to the first degree-2 vertex (a
/// central one), then keeps moving to unvisited neighbors, always the
/// smallest name first. Meeting another degree-2 vertex after `k` steps
/// means the move after step `k/2` went back toward the center, so the
/// path is cut back to that point and the other branch is taken. For even
/// `n` a central vertex can also appear after exactly `n` steps; it is told
/// apart from the exit by its second neighbors.
#[derive(Clone, Debug)]
pub struct GnWalker {
    n: u32,
    entrance: VertexName,
    cache: HashMap<VertexName, Vec<VertexName>>,
    visited: HashSet<VertexName>,
    path: Vec<VertexName>,
    center: Option<usize>,
    found: Option<VertexName>,
}

impl GnWalker {
    pub fn new(n: u32, entrance: VertexName) -> Self {
        GnWalker {
            n,
            entrance,
            cache: HashMap::new(),
            visited: HashSet::from([entrance]),
            path: vec![entrance],
            center: None,
            found: None,
        }
    }

    /// Record the sorted neighbor list of `a`.
    pub fn observe(&mut self, a: VertexName, neighbors: Vec<VertexName>) {
        self.cache.insert(a, neighbors);
    }

    pub fn step(&mut self) -> WalkerStep {
        loop {
            if let Some(z) = self.found {
                return WalkerStep::Found(z);
            }
            match self.advance() {
                Ok(true) => {}
                Ok(false) => return WalkerStep::Stuck,
                Err(need) => return WalkerStep::Query(need),
            }
        }
    }

    fn nbrs(&self, x: VertexName) -> std::result::Result<&[VertexName], VertexName> {
        self.cache.get(&x).map(Vec::as_slice).ok_or(x)
    }

    fn advance(&mut self) -> std::result::Result<bool, VertexName> {
        let Some(&x) = self.path.last() else {
            return Ok(false);
        };
        let degree = self.nbrs(x)?.len();
        match self.center {
            None if degree == 2 && x != self.entrance => {
                self.center = Some(self.path.len() - 1);
                return Ok(true);
            }
            Some(c) => {
                let k = self.path.len() - 1 - c;
                if k > 0 && degree == 2 {
                    if k == self.n as usize && self.is_exit(x)? {
                        self.found = Some(x);
                    } else {
                        self.path.truncate(c + k / 2 + 1);
                    }
                    return Ok(true);
                }
            }
            None => {}
        }
        match self
            .nbrs(x)?
            .iter()
            .find(|v| !self.visited.contains(v))
            .copied()
        {
            Some(v) => {
                self.visited.insert(v);
                self.path.push(v);
            }
            None => {
                self.path.pop();
                if self.center.is_some_and(|c| self.path.len() <= c) {
                    self.center = None;
                }
            }
        }
        Ok(true)
    }

    /// A central vertex has the entrance (`n = 2`) or another degree-2
    /// vertex (`n >= 4`) among its second neighbors; the exit has neither.
    fn is_exit(&self, z: VertexName) -> std::result::Result<bool, VertexName> {
        if self.n % 2 == 1 {
            return Ok(true);
        }
        for &y in self.nbrs(z)? {
            for &w in self.nbrs(y)? {
                if w == z {
                    continue;
                }
                if w == self.entrance || (self.n >= 4 && self.nbrs(w)?.len() == 2) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Find the exit of `G_n` from the entrance with `O(n^2)` queries.
/// Against `G'_n` the walker has no central column to steer by and usually
/// runs out of budget.
pub fn traverse_gn<O: NeighborOracle + ?Sized>(
    oracle: &O,
    n: u32,
    budget: Option<u64>,
) -> TraversalOutcome {
    let mut walker = GnWalker::new(n, oracle.entrance_name());
    let mut used = 0u64;
    loop {
        match walker.step() {
            WalkerStep::Query(x) => {
                if budget.is_some_and(|b| used >= b) {
                    return TraversalOutcome {
                        exit: None,
                        queries: used,
                        exhausted: true,
                    };
                }
                used += 1;
                let nb = oracle.neighbor_names(x);
                walker.observe(x, nb);
            }
            WalkerStep::Found(z) => {
                return TraversalOutcome {
                    exit: Some(z),
                    queries: used,
                    exhausted: false,
                }
            }
            WalkerStep::Stuck => {
                return TraversalOutcome {
                    exit: None,
                    queries: used,
                    exhausted: false,
                }
            }
        }
    }
}

/// Level-by-level walk to the antipode of the entrance of an `n`-cube.
///
/// `S_{k-1}` holds the neighbors of `a_k` one level down. `a_{k+1}` is any
/// neighbor of `a_k` outside `S_{k-1}`, and `S_k` is the set of neighbors of
/// `a_{k+1}` adjacent to something in `S_{k-1}`. Each step queries the
/// `k` members of `S_{k-1}` once, `O(n^2)` in all.
pub fn traverse_hypercube<O: NeighborOracle + ?Sized>(
    oracle: &O,
    n: u32,
) -> Result<TraversalOutcome> {
    let mut cache: HashMap<VertexName, Vec<VertexName>> = HashMap::new();
    let mut used = 0u64;
    let mut query = |x: VertexName,
                     cache: &mut HashMap<VertexName, Vec<VertexName>>|
     -> Result<Vec<VertexName>> {
        if let Some(v) = cache.get(&x) {
            return Ok(v.clone());
        }
        used += 1;
        let v = oracle.neighbor_names(x);
        if v.len() != n as usize {
            return Err(Error::Contract(format!(
                "vertex {x} has degree {}, expected {n}",
                v.len()
            )));
        }
        cache.insert(x, v.clone());
        Ok(v)
    };
    let a0 = oracle.entrance_name();
    let mut a = query(a0, &mut cache)?[0];
    let mut below: HashSet<VertexName> = HashSet::from([a0]);
    for k in 1..n as usize {
        let up = query(a, &mut cache)?
            .into_iter()
            .find(|v| !below.contains(v))
            .ok_or_else(|| Error::Contract(format!("no way up from level {k}")))?;
        let candidates = query(up, &mut cache)?;
        let mut reachable = HashSet::new();
        for &s in &below {
            reachable.extend(query(s, &mut cache)?);
        }
        let next: HashSet<VertexName> = candidates
            .into_iter()
            .filter(|w| reachable.contains(w))
            .collect();
        if next.len() != k + 1 {
            return Err(Error::Contract(format!(
                "level {k} has {} lower neighbors, expected {}",
                next.len(),
                k + 1
            )));
        }
        below = next;
        a = up;
    }
    Ok(TraversalOutcome {
        exit: Some(a),
        queries: used,
        exhausted: false,
    })
}
