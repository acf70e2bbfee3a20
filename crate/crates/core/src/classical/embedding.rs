use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::adversary::AdversaryKind;
use super::games::{play_game_traced, trial_graph, trial_rng, GameId, Reply, WinCause};
use super::par_map;
use super::stats::RateEstimate;
use crate::oracle::GraphView;
use crate::rng::{self, Artifact, Stream};
use crate::{Error, Result};

/// A rooted tree whose internal vertices have exactly two children, labeled
/// so that every vertex comes after its ancestors (root is 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedBinaryTree {
    parent: Vec<Option<u32>>,
    children: Vec<Vec<u32>>,
}

impl RootedBinaryTree {
    pub fn from_parents(parent: Vec<Option<u32>>) -> Result<Self> {
        if parent.first() != Some(&None) {
            return Err(Error::param("tree", "vertex 0 must be the root"));
        }
        let mut children = vec![Vec::new(); parent.len()];
        for (v, p) in parent.iter().enumerate().skip(1) {
            match *p {
                Some(p) if (p as usize) < v => children[p as usize].push(v as u32),
                _ => {
                    return Err(Error::param(
                        "tree",
                        format!("vertex {v} must have a smaller-labeled parent"),
                    ))
                }
            }
        }
        if let Some(v) = children.iter().position(|c| !c.is_empty() && c.len() != 2) {
            return Err(Error::param(
                "tree",
                format!("internal vertex {v} has {} children", children[v].len()),
            ));
        }
        Ok(RootedBinaryTree { parent, children })
    }

    pub fn single() -> Self {
        RootedBinaryTree {
            parent: vec![None],
            children: vec![Vec::new()],
        }
    }

    /// Complete tree of the given depth, `2^{depth+1} - 1` vertices, in
    /// breadth-first order.
    pub fn complete(depth: u32) -> Self {
        let t = (1u32 << (depth + 1)) - 1;
        let parent = (0..t).map(|v| (v > 0).then(|| (v - 1) / 2)).collect();
        Self::from_parents(parent).expect("breadth-first labels are ancestor ordered")
    }

    /// A spine of `internal` vertices, each with one leaf child; `2 internal + 1`
    /// vertices and depth `internal`.
    pub fn caterpillar(internal: u32) -> Self {
        let mut parent = vec![None];
        let mut spine = 0u32;
        for _ in 0..internal {
            let base = parent.len() as u32;
            parent.push(Some(spine));
            parent.push(Some(spine));
            spine = base + 1;
        }
        Self::from_parents(parent).expect("spine labels are ancestor ordered")
    }

    /// Grow by splitting a uniformly chosen leaf until there are `internal`
    /// internal vertices; labels are reassigned breadth-first.
    pub fn random(internal: u32, rng: &mut Stream) -> Self {
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut leaves = vec![0usize];
        for _ in 0..internal {
            let v = leaves.swap_remove(rng.gen_range(0..leaves.len()));
            for _ in 0..2 {
                children.push(Vec::new());
                let c = children.len() - 1;
                children[v].push(c);
                leaves.push(c);
            }
        }
        let mut order = vec![0usize];
        let mut label = vec![0u32; children.len()];
        let mut parent = vec![None];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &c in &children[v] {
                label[c] = order.len() as u32;
                order.push(c);
                parent.push(Some(label[v]));
            }
            i += 1;
        }
        Self::from_parents(parent).expect("breadth-first labels are ancestor ordered")
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        self.parent[v as usize]
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    pub fn is_leaf(&self, v: u32) -> bool {
        self.children[v as usize].is_empty()
    }

    pub fn depth(&self) -> u32 {
        let mut d = vec![0u32; self.len()];
        for v in 1..self.len() {
            d[v] = d[self.parent[v].unwrap() as usize] + 1;
        }
        d.into_iter().max().unwrap_or(0)
    }
}

/// Catalogued tree shapes for the embedding game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeFamily {
    Single,
    Complete,
    Caterpillar,
    Random,
}

impl TreeFamily {
    pub const ALL: [TreeFamily; 4] = [
        TreeFamily::Single,
        TreeFamily::Complete,
        TreeFamily::Caterpillar,
        TreeFamily::Random,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TreeFamily::Single => "single",
            TreeFamily::Complete => "complete",
            TreeFamily::Caterpillar => "caterpillar",
            TreeFamily::Random => "random",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "tree family",
                value: s.to_string(),
            })
    }

    /// The largest member with at most `max_vertices` vertices. Legal trees
    /// have odd size, so an even cap is rounded down.
    pub fn build(self, max_vertices: u32, seed: u64) -> Result<RootedBinaryTree> {
        if max_vertices == 0 {
            return Err(Error::param("max_vertices", "must be positive"));
        }
        let internal = (max_vertices - 1) / 2;
        Ok(match self {
            TreeFamily::Single => RootedBinaryTree::single(),
            TreeFamily::Complete => RootedBinaryTree::complete((max_vertices + 1).ilog2() - 1),
            TreeFamily::Caterpillar => RootedBinaryTree::caterpillar(internal),
            TreeFamily::Random => {
                RootedBinaryTree::random(internal, &mut rng::stream(seed, Artifact::Embedding))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `None` for vertices below a halted expansion.
    pub map: Vec<Option<u64>>,
    pub proper: bool,
    pub exited: bool,
    pub deepest_column: u32,
}

/// The random embedding procedure with its coin flips supplied by `coin`:
/// called with (tree vertex, `u`, `v`) where `u < v` are the two candidate
/// images, it returns true to send the lower-labeled child to `u`.
///
/// Vertex 0 goes to the entrance and its children to the entrance's two
/// neighbors. Each later non-leaf vertex whose image is neither entrance nor
/// exit sends its two children to the image's neighbors other than its
/// parent's image.
pub fn embed_with_coins<G: GraphView + ?Sized>(
    tree: &RootedBinaryTree,
    graph: &mut G,
    mut coin: impl FnMut(u32, u64, u64) -> bool,
) -> Embedding {
    let (entrance, exit) = (graph.entrance(), graph.exit());
    let mut map: Vec<Option<u64>> = vec![None; tree.len()];
    map[0] = Some(entrance);
    for i in 0..tree.len() as u32 {
        let Some(image) = map[i as usize] else {
            continue;
        };
        if tree.is_leaf(i) || (i > 0 && (image == entrance || image == exit)) {
            continue;
        }
        let from = tree.parent(i).and_then(|l| map[l as usize]);
        let mut cand: Vec<u64> = graph.neighbors_of(image);
        if let Some(p) = from {
            if let Some(k) = cand.iter().position(|&x| x == p) {
                cand.remove(k);
            }
        }
        cand.sort_unstable();
        let (u, v) = (cand[0], cand[1]);
        let (j, k) = (tree.children(i)[0], tree.children(i)[1]);
        let (a, b) = if coin(i, u, v) { (u, v) } else { (v, u) };
        map[j as usize] = Some(a);
        map[k as usize] = Some(b);
    }
    let mut images = HashSet::new();
    let proper = map.iter().flatten().all(|&x| images.insert(x));
    let exited = images.contains(&exit);
    let deepest_column = images
        .iter()
        .map(|&x| graph.column_of(x))
        .max()
        .unwrap_or(0);
    Embedding {
        map,
        proper,
        exited,
        deepest_column,
    }
}

pub fn random_embedding<G: GraphView + ?Sized>(
    tree: &RootedBinaryTree,
    graph: &mut G,
    rng: &mut Stream,
) -> Embedding {
    embed_with_coins(tree, graph, |_, _, _| rng.gen::<bool>())
}

/// Embedding-game win rate over fresh graphs and embeddings, with the two
/// ways of winning reported apart: a repeated image (improper) and reaching
/// column `n + n/2`, past which the exit lies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingEstimate {
    pub n: u32,
    pub vertices: usize,
    pub rate: RateEstimate,
    pub improper: RateEstimate,
    pub deep: RateEstimate,
    pub exited: RateEstimate,
    /// `3 * 2^{-n/6}` when the tree has at most `2^{n/6}` vertices.
    pub bound: Option<f64>,
}

pub fn estimate_embedding_game(
    tree: &RootedBinaryTree,
    n: u32,
    trials: u64,
    seed: u64,
) -> Result<EmbeddingEstimate> {
    if trials < 100 {
        return Err(Error::param("trials", format!("{trials} is below 100")));
    }
    let deep_column = n + n / 2;
    let outcomes = par_map(trials, |i| -> Result<(bool, bool, bool)> {
        let mut g = trial_graph(n, seed, i)?;
        let e = random_embedding(
            tree,
            &mut g,
            &mut rng::substream(seed, Artifact::Embedding, i),
        );
        Ok((!e.proper, e.deepest_column >= deep_column, e.exited))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let count =
        |f: &dyn Fn(&(bool, bool, bool)) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let cap = 2f64.powf(n as f64 / 6.0);
    Ok(EmbeddingEstimate {
        n,
        vertices: tree.len(),
        rate: RateEstimate::new(count(&|o| o.0 || o.2), trials),
        improper: RateEstimate::new(count(&|o| o.0), trials),
        deep: RateEstimate::new(count(&|o| o.1), trials),
        exited: RateEstimate::new(count(&|o| o.2), trials),
        bound: (tree.len() as f64 <= cap).then(|| 3.0 / cap),
    })
}

/// A game-4 transcript turned into a tree and an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayedTree {
    pub tree: RootedBinaryTree,
    pub map: Vec<u64>,
}

/// Each newly queried vertex becomes an internal tree vertex whose two
/// children stand for its neighbors other than the one it was reached from.
pub fn transcript_tree(
    entrance: u64,
    transcript: &[super::games::TranscriptEntry],
) -> Result<ReplayedTree> {
    let mut parent: Vec<Option<u32>> = vec![None];
    let mut map = vec![entrance];
    let mut node_of: HashMap<u64, u32> = HashMap::from([(entrance, 0)]);
    let mut expanded: HashSet<u32> = HashSet::new();
    for e in transcript {
        let (Some(x), Reply::Neighbors(_)) = (e.vertex, &e.reply) else {
            continue;
        };
        let a = *node_of
            .get(&x)
            .ok_or_else(|| Error::Contract(format!("queried vertex {x} was never revealed")))?;
        if !expanded.insert(a) {
            continue;
        }
        let from = parent[a as usize].map(|p| map[p as usize]);
        let mut kids: Vec<u64> = e
            .neighbor_ids
            .iter()
            .copied()
            .filter(|&u| Some(u) != from)
            .collect();
        kids.sort_unstable();
        if kids.len() != 2 {
            return Err(Error::Contract(format!(
                "vertex {x} expands to {} children",
                kids.len()
            )));
        }
        for u in kids {
            node_of.entry(u).or_insert(map.len() as u32);
            parent.push(Some(a));
            map.push(u);
        }
    }
    Ok(ReplayedTree {
        tree: RootedBinaryTree::from_parents(parent)?,
        map,
    })
}

/// Paired game-4 runs and embedding-game replays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayCheck {
    pub trials: u64,
    /// Trials where the replayed embedding wins exactly when game 4 is won
    /// or the exit's name was revealed.
    pub agree: u64,
    /// Trials where the coin-driven procedure reproduced the replayed map.
    pub maps_reproduced: u64,
    /// Revealed-but-never-sent exits (game 4 lost, embedding exits).
    pub exit_revealed_only: u64,
    pub game4_wins: u64,
}

pub fn replay_check(
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<ReplayCheck> {
    let rows = par_map(trials, |i| -> Result<(bool, bool, bool, bool)> {
        let mut g = trial_graph(n, seed, i)?;
        let mut a = kind.build(n, crate::oracle::NamedGraph::name_width(&g));
        let (res, transcript) = play_game_traced(
            GameId::NoCycles,
            &mut a,
            &mut g,
            budget,
            &mut trial_rng(seed, i),
            seed,
        );
        let replay = transcript_tree(g.entrance(), &transcript)?;
        let target = &replay.map;
        let emb = embed_with_coins(&replay.tree, &mut g, |v, u, _| {
            let j = replay.tree.children(v)[0];
            target[j as usize] == u
        });
        let reproduced = emb.map.iter().zip(target).all(|(m, &t)| *m == Some(t));
        let wins5 = !emb.proper || emb.exited;
        let wins4 = res.won() || res.exit_revealed;
        let cycle_match = (res.win == Some(WinCause::CycleFound)) == !emb.proper;
        Ok((
            wins5 == wins4 && cycle_match,
            reproduced,
            res.exit_revealed && !res.won(),
            res.won(),
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let count =
        |f: &dyn Fn(&(bool, bool, bool, bool)) -> bool| rows.iter().filter(|r| f(r)).count() as u64;
    Ok(ReplayCheck {
        trials,
        agree: count(&|r| r.0),
        maps_reproduced: count(&|r| r.1),
        exit_revealed_only: count(&|r| r.2),
        game4_wins: count(&|r| r.3),
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracle::{GluedTrees, LazyGluedTrees};

    #[test]
    fn tree_shapes() {
        assert_eq!(RootedBinaryTree::complete(3).len(), 15);
        assert_eq!(RootedBinaryTree::caterpillar(7).len(), 15);
        assert_eq!(RootedBinaryTree::caterpillar(7).depth(), 7);
        assert_eq!(TreeFamily::Complete.build(16, 0).unwrap().len(), 15);
        assert_eq!(TreeFamily::Caterpillar.build(4, 0).unwrap().len(), 3);
        assert!(RootedBinaryTree::from_parents(vec![None, Some(0)]).is_err());
        assert!(RootedBinaryTree::from_parents(vec![None, Some(2), Some(0)]).is_err());
    }

    #[test]
    fn single_vertex_maps_to_entrance() {
        let mut g = LazyGluedTrees::new(10, 1).unwrap();
        let e = random_embedding(
            &RootedBinaryTree::single(),
            &mut g,
            &mut rng::stream(1, Artifact::Embedding),
        );
        assert_eq!(e.map, vec![Some(0)]);
        assert!(e.proper && !e.exited);
        let est = estimate_embedding_game(&RootedBinaryTree::single(), 12, 200, 1).unwrap();
        assert_eq!(est.rate.successes, 0);
    }

    #[test]
    fn embedding_preserves_adjacency() {
        let g = GluedTrees::standard(5, 3).unwrap();
        let mut view = &g;
        let tree = RootedBinaryTree::random(20, &mut rng::stream(4, Artifact::Embedding));
        let e = random_embedding(&tree, &mut view, &mut rng::stream(5, Artifact::Embedding));
        for v in 1..tree.len() as u32 {
            if let (Some(a), Some(b)) = (e.map[v as usize], e.map[tree.parent(v).unwrap() as usize])
            {
                assert!(g.neighbors(a as u32).contains(&(b as u32)));
            }
        }
    }

    #[test]
    fn shallow_trees_never_exit() {
        for n in [3u32, 6, 10] {
            let tree = RootedBinaryTree::caterpillar(n);
            assert!(tree.len() < 2 * n as usize + 2);
            let est = estimate_embedding_game(&tree, n, 300, n as u64).unwrap();
            assert_eq!(est.exited.successes, 0);
        }
    }

    #[test]
    fn small_trees_stay_under_bound() {
        let tree = TreeFamily::Caterpillar.build(4, 0).unwrap();
        let est = estimate_embedding_game(&tree, 12, 1000, 2).unwrap();
        assert!(est.rate.upper <= 0.75);
        assert_eq!(est.bound, Some(0.75));
    }

    #[test]
    fn deep_trees_find_cycles() {
        // A complete tree reaching past the center of G'_2 closes loops
        // through the leaf cycle.
        let est = estimate_embedding_game(&RootedBinaryTree::complete(5), 2, 500, 3).unwrap();
        assert!(est.improper.successes > 0);
    }

    #[test]
    fn replay_agrees_with_game_four() {
        for kind in [
            AdversaryKind::DepthFirst,
            AdversaryKind::UniformWalker,
            AdversaryKind::NonBacktracking,
        ] {
            let r = replay_check(kind, 3, 20, 500, 8).unwrap();
            assert_eq!(r.agree, r.trials, "{r:?}");
            assert_eq!(r.maps_reproduced, r.trials);
            assert!(r.game4_wins > 0);
        }
    }

    proptest! {
        #[test]
        fn random_trees_are_legal(internal in 0u32..40, seed in 0u64..1000) {
            let t = RootedBinaryTree::random(internal, &mut rng::stream(seed, Artifact::Embedding));
            prop_assert_eq!(t.len(), 2 * internal as usize + 1);
            prop_assert!(RootedBinaryTree::from_parents(t.parent.clone()).is_ok());
        }
    }
}
