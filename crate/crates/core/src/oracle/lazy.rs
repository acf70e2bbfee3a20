//! Glued-trees graphs sampled on demand.
//!
//! For depths where the explicit graph would not fit in memory, the random
//! choices (leaf cycle, names, colors) are deferred until a query touches
//! them. Each deferred draw is taken from the exact conditional law given
//! everything revealed so far, so any transcript has the same distribution
//! as against an explicit graph.
//!
//! The leaf cycle is tracked as a set of disjoint paths. Writing `a` for the
//! number of left-left segments (isolated left leaves included; equal to
//! the right-right count) and `c` for the left-right paths, the number of
//! alternating cycles completing the revealed paths is
//! `a! (a-1)! (2a-1+c)! / (2a-1)! * 2^(2a-1)`. Linking a leaf on a
//! same-side segment to a same-side stub opposite versus a left-right end
//! therefore has relative weight `(2a-1) : 2a`; a leaf on a left-right path
//! picks uniformly among all opposite stubs, closing the cycle only when
//! nothing else is left.

use std::collections::{HashMap, HashSet};

use rand::Rng;

use super::{naming::fitting_name_width, Color, GraphKind, GraphView, NamedGraph, VertexName};
use crate::rng::{self, Artifact, Stream};
use crate::{Error, Result};

#[derive(Debug, Default, Clone)]
struct PathSet {
    items: Vec<(u64, u64)>,
    pos: HashMap<(u64, u64), usize>,
}

impl PathSet {
    fn key(a: u64, b: u64) -> (u64, u64) {
        (a.min(b), a.max(b))
    }

    fn insert(&mut self, a: u64, b: u64) {
        let k = Self::key(a, b);
        self.pos.insert(k, self.items.len());
        self.items.push(k);
    }

    fn remove(&mut self, a: u64, b: u64) {
        let k = Self::key(a, b);
        let i = self.pos.remove(&k).expect("path present");
        self.items.swap_remove(i);
        if i < self.items.len() {
            self.pos.insert(self.items[i], i);
        }
    }

    fn len(&self) -> u64 {
        self.items.len() as u64
    }
}

#[derive(Debug, Clone)]
pub struct LazyGluedTrees {
    n: u32,
    width: u32,
    leaves: u64,
    column_start: Vec<u64>,
    rng: Stream,
    partners: HashMap<u64, Vec<u64>>,
    end_of: HashMap<u64, u64>,
    same: [PathSet; 2],
    mixed: PathSet,
    touched: [u64; 2],
    name_of: HashMap<u64, u64>,
    vertex_of: HashMap<u64, u64>,
    non_names: HashSet<u64>,
    symbols: HashMap<(u64, u64), u8>,
    used_symbols: HashMap<u64, u8>,
}

impl LazyGluedTrees {
    /// Names use `2n` bits, widened as for explicit graphs when needed.
    pub fn new(n: u32, seed: u64) -> Result<Self> {
        let width = fitting_name_width(n, GraphKind::RandomCycle.vertex_count(n.clamp(1, 30)));
        Self::with_width(n, width, seed)
    }

    pub fn with_width(n: u32, width: u32, seed: u64) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::param("n", format!("{n} not in 1..=30")));
        }
        let kind = GraphKind::RandomCycle;
        let total = kind.vertex_count(n);
        if width > VertexName::MAX_WIDTH || (1u64 << width) - 1 < total {
            return Err(Error::NameSpaceExhausted {
                needed: total - 1,
                available: (1u64 << width.min(62)) - 2,
                width,
            });
        }
        let mut column_start = vec![0u64];
        for j in 0..kind.column_count(n) {
            column_start.push(column_start[j as usize] + kind.column_size(n, j));
        }
        let mut g = LazyGluedTrees {
            n,
            width,
            leaves: 1 << n,
            column_start,
            rng: rng::stream(seed, Artifact::Sampling),
            partners: HashMap::new(),
            end_of: HashMap::new(),
            same: [PathSet::default(), PathSet::default()],
            mixed: PathSet::default(),
            touched: [0, 0],
            name_of: HashMap::new(),
            vertex_of: HashMap::new(),
            non_names: HashSet::new(),
            symbols: HashMap::new(),
            used_symbols: HashMap::new(),
        };
        g.name_of.insert(0, 0);
        g.vertex_of.insert(0, 0);
        Ok(g)
    }

    pub fn vertex_count(&self) -> u64 {
        *self.column_start.last().unwrap()
    }

    fn id(&self, j: u32, i: u64) -> u64 {
        self.column_start[j as usize] + i
    }

    fn col_index(&self, v: u64) -> (u32, u64) {
        let j = self.column_start.partition_point(|&s| s <= v) - 1;
        (j as u32, v - self.column_start[j])
    }

    fn side(&self, leaf: u64) -> usize {
        usize::from(self.col_index(leaf).0 != self.n)
    }

    fn other_end(&self, leaf: u64) -> u64 {
        self.end_of.get(&leaf).copied().unwrap_or(leaf)
    }

    fn isolated(&self, side: usize) -> u64 {
        self.leaves - self.touched[side]
    }

    fn random_isolated(&mut self, side: usize) -> u64 {
        let col = self.n + side as u32;
        loop {
            let i = self.rng.gen_range(0..self.leaves);
            let v = self.id(col, i);
            if !self.partners.contains_key(&v) {
                return v;
            }
        }
    }

    /// The end on side `o` of a same-side stub, indexed over
    /// `2*isolated + 2*paths` stubs.
    fn stub(&mut self, o: usize, s: u64) -> u64 {
        let iso = self.isolated(o);
        if s < 2 * iso {
            self.random_isolated(o)
        } else {
            let (a, b) = self.same[o].items[((s - 2 * iso) / 2) as usize];
            if s % 2 == 0 {
                a
            } else {
                b
            }
        }
    }

    fn mixed_end(&self, i: u64, o: usize) -> u64 {
        let (l, r) = self.mixed.items[i as usize];
        if o == 0 {
            l
        } else {
            r
        }
    }

    fn sample_partner(&mut self, x: u64) -> u64 {
        let s = self.side(x);
        let o = 1 - s;
        let y = self.other_end(x);
        let stubs = 2 * self.isolated(o) + 2 * self.same[o].len();
        let c = self.mixed.len();
        if self.side(y) != s {
            let total = stubs + c - 1;
            if total == 0 {
                return y;
            }
            let u = self.rng.gen_range(0..total);
            if u < stubs {
                return self.stub(o, u);
            }
            let own = self.mixed.pos[&PathSet::key(x, y)] as u64;
            let mut i = u - stubs;
            if i >= own {
                i += 1;
            }
            self.mixed_end(i, o)
        } else {
            let a = stubs / 2;
            debug_assert!(a >= 1);
            let (ws, wm) = (2 * a - 1, 2 * a);
            let u = self.rng.gen_range(0..stubs * ws + c * wm);
            if u < stubs * ws {
                self.stub(o, u / ws)
            } else {
                self.mixed_end((u - stubs * ws) / wm, o)
            }
        }
    }

    fn drop_segment(&mut self, a: u64, b: u64) {
        if a == b {
            return;
        }
        let (sa, sb) = (self.side(a), self.side(b));
        if sa == sb {
            self.same[sa].remove(a, b);
        } else {
            self.mixed.remove(a, b);
        }
    }

    fn link(&mut self, x: u64, z: u64) {
        let ox = self.other_end(x);
        let oz = self.other_end(z);
        self.drop_segment(x, ox);
        if oz != x {
            self.drop_segment(z, oz);
        }
        for (p, q) in [(x, z), (z, x)] {
            let side = self.side(p);
            let e = self.partners.entry(p).or_default();
            if e.is_empty() {
                self.touched[side] += 1;
            }
            e.push(q);
        }
        self.end_of.remove(&x);
        self.end_of.remove(&z);
        if oz == x {
            return;
        }
        self.end_of.insert(ox, oz);
        self.end_of.insert(oz, ox);
        let (sa, sb) = (self.side(ox), self.side(oz));
        if sa == sb {
            self.same[sa].insert(ox, oz);
        } else {
            self.mixed.insert(ox, oz);
        }
        debug_assert_eq!(
            self.isolated(0) + self.same[0].len(),
            self.isolated(1) + self.same[1].len()
        );
    }

    fn cycle_neighbors(&mut self, leaf: u64) -> [u64; 2] {
        while self.partners.get(&leaf).map_or(0, Vec::len) < 2 {
            let z = self.sample_partner(leaf);
            self.link(leaf, z);
        }
        let p = &self.partners[&leaf];
        [p[0], p[1]]
    }

    fn neighbors(&mut self, v: u64) -> Vec<u64> {
        let n = self.n;
        let (j, i) = self.col_index(v);
        let last = 2 * n + 1;
        let mut out = Vec::with_capacity(3);
        if j == 0 || j == last {
            let next = if j == 0 { 1 } else { last - 1 };
            out.push(self.id(next, 0));
            out.push(self.id(next, 1));
        } else if j <= n {
            out.push(self.id(j - 1, i / 2));
            if j < n {
                out.push(self.id(j + 1, 2 * i));
                out.push(self.id(j + 1, 2 * i + 1));
            } else {
                out.extend(self.cycle_neighbors(v));
            }
        } else {
            out.push(self.id(j + 1, i / 2));
            if j > n + 1 {
                out.push(self.id(j - 1, 2 * i));
                out.push(self.id(j - 1, 2 * i + 1));
            } else {
                out.extend(self.cycle_neighbors(v));
            }
        }
        out
    }

    fn name_pool(&self) -> u64 {
        (1u64 << self.width) - 2
    }

    fn name(&mut self, v: u64) -> u64 {
        if let Some(&s) = self.name_of.get(&v) {
            return s;
        }
        let pool = self.name_pool();
        let s = loop {
            let s = self.rng.gen_range(1..=pool);
            if !self.vertex_of.contains_key(&s) && !self.non_names.contains(&s) {
                break s;
            }
        };
        self.name_of.insert(v, s);
        self.vertex_of.insert(s, v);
        s
    }

    fn lookup(&mut self, s: u64) -> Option<u64> {
        if s > self.name_pool() {
            return None;
        }
        if let Some(&v) = self.vertex_of.get(&s) {
            return Some(v);
        }
        if self.non_names.contains(&s) {
            return None;
        }
        let named = self.vertex_of.len() as u64 - 1;
        let unnamed = self.vertex_count() - 1 - named;
        let unused = self.name_pool() - named - self.non_names.len() as u64;
        if self.rng.gen_range(0..unused) < unnamed {
            let v = loop {
                let v = self.rng.gen_range(1..self.vertex_count());
                if !self.name_of.contains_key(&v) {
                    break v;
                }
            };
            self.name_of.insert(v, s);
            self.vertex_of.insert(s, v);
            Some(v)
        } else {
            self.non_names.insert(s);
            None
        }
    }

    fn symbol(&mut self, v: u64, u: u64) -> u8 {
        if let Some(&s) = self.symbols.get(&(v, u)) {
            return s;
        }
        let used = self.used_symbols.entry(v).or_insert(0);
        let free: Vec<u8> = (0..3).filter(|b| *used & (1 << b) == 0).collect();
        let s = free[self.rng.gen_range(0..free.len())];
        *used |= 1 << s;
        self.symbols.insert((v, u), s);
        s
    }

    /// Revealed cycle partners so far (test aid).
    pub fn revealed_cycle_edges(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .partners
            .iter()
            .flat_map(|(&a, ps)| ps.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort();
        out
    }

    pub fn leaf_ids(&self, side: usize) -> std::ops::Range<u64> {
        let col = self.n as usize + side;
        self.column_start[col]..self.column_start[col + 1]
    }
}

impl GraphView for LazyGluedTrees {
    fn depth(&self) -> u32 {
        self.n
    }

    fn entrance(&self) -> u64 {
        0
    }

    fn exit(&self) -> u64 {
        self.vertex_count() - 1
    }

    fn column_of(&self, v: u64) -> u32 {
        self.col_index(v).0
    }

    fn neighbors_of(&mut self, v: u64) -> Vec<u64> {
        self.neighbors(v)
    }
}

impl NamedGraph for LazyGluedTrees {
    fn name_width(&self) -> u32 {
        self.width
    }

    fn resolve(&mut self, name: VertexName) -> Option<u64> {
        if name.width() != self.width {
            return None;
        }
        self.lookup(name.bits())
    }

    fn name_of_vertex(&mut self, v: u64) -> VertexName {
        VertexName::raw(self.name(v), self.width)
    }

    fn edge_color(&mut self, u: u64, v: u64) -> Color {
        let (even, odd) = if self.col_index(u).0 % 2 == 0 {
            (u, v)
        } else {
            (v, u)
        };
        let l = self.symbol(even, odd);
        let d = self.symbol(odd, even);
        Color::new(l, d).expect("symbols are below 3")
    }
}
