use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::games::Reply;
use super::traverse::{GnWalker, WalkerStep};
use crate::oracle::{Color, Neighbor, VertexName};
use crate::rng::Stream;
use crate::{Error, Result};

/// A query algorithm as the games see it: it is told the entrance, then
/// alternates between naming its next query and reading the reply. It has no
/// other access to the graph.
pub trait Adversary: Send {
    fn label(&self) -> &'static str;
    fn start(&mut self, entrance: VertexName);
    /// `None` ends the game early.
    fn next_query(&mut self, rng: &mut Stream) -> Option<VertexName>;
    fn observe(&mut self, query: VertexName, reply: &Reply, rng: &mut Stream);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    UniformWalker,
    NonBacktracking,
    DepthFirst,
    DegreeAware,
    RandomGuesser,
    ColorFollower,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 6] = [
        AdversaryKind::UniformWalker,
        AdversaryKind::NonBacktracking,
        AdversaryKind::DepthFirst,
        AdversaryKind::DegreeAware,
        AdversaryKind::RandomGuesser,
        AdversaryKind::ColorFollower,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AdversaryKind::UniformWalker => "uniform-walker",
            AdversaryKind::NonBacktracking => "non-backtracking",
            AdversaryKind::DepthFirst => "depth-first",
            AdversaryKind::DegreeAware => "degree-aware",
            AdversaryKind::RandomGuesser => "random-guesser",
            AdversaryKind::ColorFollower => "color-follower",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "adversary",
                value: s.to_string(),
            })
    }

    /// `n` is the graph depth and `width` the name length, both public.
    pub fn build(self, n: u32, width: u32) -> Box<dyn Adversary> {
        match self {
            AdversaryKind::UniformWalker => Box::new(Walker::new(false)),
            AdversaryKind::NonBacktracking => Box::new(Walker::new(true)),
            AdversaryKind::DepthFirst => Box::new(DepthFirst::new(false)),
            AdversaryKind::ColorFollower => Box::new(DepthFirst::new(true)),
            AdversaryKind::DegreeAware => Box::new(DegreeAware { n, walker: None }),
            AdversaryKind::RandomGuesser => Box::new(RandomGuesser { width }),
        }
    }
}

/// The registry of baseline adversaries.
pub fn adversary_catalog() -> &'static [AdversaryKind] {
    &AdversaryKind::ALL
}

fn names(reply: &Reply) -> Vec<VertexName> {
    match reply {
        Reply::Neighbors(nb) => nb.iter().map(|x| x.name).collect(),
        _ => Vec::new(),
    }
}

/// Random walk over revealed names, optionally never stepping straight back.
struct Walker {
    non_backtracking: bool,
    current: Option<VertexName>,
    previous: Option<VertexName>,
}

impl Walker {
    fn new(non_backtracking: bool) -> Self {
        Walker {
            non_backtracking,
            current: None,
            previous: None,
        }
    }
}

impl Adversary for Walker {
    fn label(&self) -> &'static str {
        if self.non_backtracking {
            AdversaryKind::NonBacktracking.label()
        } else {
            AdversaryKind::UniformWalker.label()
        }
    }

    fn start(&mut self, entrance: VertexName) {
        self.current = Some(entrance);
        self.previous = None;
    }

    fn next_query(&mut self, _: &mut Stream) -> Option<VertexName> {
        self.current
    }

    fn observe(&mut self, query: VertexName, reply: &Reply, rng: &mut Stream) {
        let all = names(reply);
        let forward: Vec<_> = all
            .iter()
            .copied()
            .filter(|&v| Some(v) != self.previous)
            .collect();
        let pool = if self.non_backtracking && !forward.is_empty() {
            &forward
        } else {
            &all
        };
        if let Some(&next) = pool.choose(rng) {
            self.previous = Some(query);
            self.current = Some(next);
        }
    }
}

/// Depth-first exploration; ties broken by name, or by color when
/// `by_color` and the reply carries colors.
struct DepthFirst {
    by_color: bool,
    stack: Vec<VertexName>,
    queried: HashSet<VertexName>,
}

impl DepthFirst {
    fn new(by_color: bool) -> Self {
        DepthFirst {
            by_color,
            stack: Vec::new(),
            queried: HashSet::new(),
        }
    }
}

impl Adversary for DepthFirst {
    fn label(&self) -> &'static str {
        if self.by_color {
            AdversaryKind::ColorFollower.label()
        } else {
            AdversaryKind::DepthFirst.label()
        }
    }

    fn start(&mut self, entrance: VertexName) {
        self.stack = vec![entrance];
        self.queried.clear();
    }

    fn next_query(&mut self, _: &mut Stream) -> Option<VertexName> {
        while let Some(x) = self.stack.pop() {
            if self.queried.insert(x) {
                return Some(x);
            }
        }
        None
    }

    fn observe(&mut self, _: VertexName, reply: &Reply, _: &mut Stream) {
        let Reply::Neighbors(nb) = reply else { return };
        let mut nb: Vec<&Neighbor> = nb
            .iter()
            .filter(|x| !self.queried.contains(&x.name))
            .collect();
        if self.by_color {
            nb.sort_by_key(|x| (x.color, x.name));
        }
        self.stack.extend(nb.iter().rev().map(|x| x.name));
    }
}

/// The degree-guided `G_n` strategy played as an adversary.
struct DegreeAware {
    n: u32,
    walker: Option<GnWalker>,
}

impl Adversary for DegreeAware {
    fn label(&self) -> &'static str {
        AdversaryKind::DegreeAware.label()
    }

    fn start(&mut self, entrance: VertexName) {
        self.walker = Some(GnWalker::new(self.n, entrance));
    }

    fn next_query(&mut self, _: &mut Stream) -> Option<VertexName> {
        match self.walker.as_mut()?.step() {
            WalkerStep::Query(x) => Some(x),
            WalkerStep::Found(_) | WalkerStep::Stuck => None,
        }
    }

    fn observe(&mut self, query: VertexName, reply: &Reply, _: &mut Stream) {
        if let Some(w) = self.walker.as_mut() {
            w.observe(query, names(reply));
        }
    }
}

/// Uniformly random name strings.
struct RandomGuesser {
    width: u32,
}

impl Adversary for RandomGuesser {
    fn label(&self) -> &'static str {
        AdversaryKind::RandomGuesser.label()
    }

    fn start(&mut self, _: VertexName) {}

    fn next_query(&mut self, rng: &mut Stream) -> Option<VertexName> {
        VertexName::new(rng.gen::<u64>() & VertexName::mask(self.width), self.width).ok()
    }

    fn observe(&mut self, _: VertexName, _: &Reply, _: &mut Stream) {}
}

/// Turns a game-1 algorithm into one that only sends names it has been
/// given: any other query is answered `11...1` locally, without asking the
/// oracle, and still counts against the inner algorithm's budget.
pub struct RestrictToSeen<A> {
    inner: A,
    seen: HashSet<VertexName>,
    budget: u64,
    used: u64,
}

impl<A: Adversary> RestrictToSeen<A> {
    pub fn new(inner: A, budget: u64) -> Self {
        RestrictToSeen {
            inner,
            seen: HashSet::new(),
            budget,
            used: 0,
        }
    }
}

impl<A: Adversary> Adversary for RestrictToSeen<A> {
    fn label(&self) -> &'static str {
        self.inner.label()
    }

    fn start(&mut self, entrance: VertexName) {
        self.seen = HashSet::from([entrance]);
        self.used = 0;
        self.inner.start(entrance);
    }

    fn next_query(&mut self, rng: &mut Stream) -> Option<VertexName> {
        while self.used < self.budget {
            let q = self.inner.next_query(rng)?;
            self.used += 1;
            if self.seen.contains(&q) {
                return Some(q);
            }
            self.inner.observe(q, &Reply::NotAVertex, rng);
        }
        None
    }

    fn observe(&mut self, query: VertexName, reply: &Reply, rng: &mut Stream) {
        self.seen.extend(names(reply));
        self.inner.observe(query, reply, rng);
    }
}

/// Runs a colored-game algorithm without colors by making up a random
/// coloring as it goes. A vertex's side is the parity of its distance from
/// the entrance; each endpoint draws its symbol for an edge uniformly from
/// the symbols it has not used yet (letters on even vertices, digits on odd).
pub struct MadeUpColors<A> {
    inner: A,
    odd: HashMap<VertexName, bool>,
    symbols: HashMap<(VertexName, VertexName), u8>,
    used: HashMap<VertexName, u8>,
}

impl<A: Adversary> MadeUpColors<A> {
    pub fn new(inner: A) -> Self {
        MadeUpColors {
            inner,
            odd: HashMap::new(),
            symbols: HashMap::new(),
            used: HashMap::new(),
        }
    }

    fn symbol(&mut self, at: VertexName, other: VertexName, rng: &mut Stream) -> u8 {
        if let Some(&s) = self.symbols.get(&(at, other)) {
            return s;
        }
        let mask = self.used.entry(at).or_default();
        let free: Vec<u8> = (0..3).filter(|s| *mask & (1 << s) == 0).collect();
        let s = *free.choose(rng).expect("degree is at most 3");
        *mask |= 1 << s;
        self.symbols.insert((at, other), s);
        s
    }
}

impl<A: Adversary> Adversary for MadeUpColors<A> {
    fn label(&self) -> &'static str {
        self.inner.label()
    }

    fn start(&mut self, entrance: VertexName) {
        self.odd = HashMap::from([(entrance, false)]);
        self.symbols.clear();
        self.used.clear();
        self.inner.start(entrance);
    }

    fn next_query(&mut self, rng: &mut Stream) -> Option<VertexName> {
        self.inner.next_query(rng)
    }

    fn observe(&mut self, query: VertexName, reply: &Reply, rng: &mut Stream) {
        let Reply::Neighbors(nb) = reply else {
            return self.inner.observe(query, reply, rng);
        };
        let q_odd = self.odd.get(&query).copied().unwrap_or(false);
        let colored = nb
            .iter()
            .map(|x| {
                self.odd.entry(x.name).or_insert(!q_odd);
                let (even, odd) = if q_odd {
                    (x.name, query)
                } else {
                    (query, x.name)
                };
                let letter = self.symbol(even, odd, rng);
                let digit = self.symbol(odd, even, rng);
                Neighbor {
                    name: x.name,
                    color: Some(Color::new(letter, digit).expect("symbols are below 3")),
                }
            })
            .collect();
        self.inner.observe(query, &Reply::Neighbors(colored), rng);
    }
}

impl Adversary for Box<dyn Adversary> {
    fn label(&self) -> &'static str {
        (**self).label()
    }

    fn start(&mut self, entrance: VertexName) {
        (**self).start(entrance)
    }

    fn next_query(&mut self, rng: &mut Stream) -> Option<VertexName> {
        (**self).next_query(rng)
    }

    fn observe(&mut self, query: VertexName, reply: &Reply, rng: &mut Stream) {
        (**self).observe(query, reply, rng)
    }
}
