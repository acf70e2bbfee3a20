use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::adversary::{Adversary, AdversaryKind, MadeUpColors, RestrictToSeen};
use super::par_map;
use super::stats::{two_proportion_z, RateEstimate};
use crate::oracle::{LazyGluedTrees, NamedGraph, Neighbor, VertexName};
use crate::rng::{self, Artifact, Stream};
use crate::{Error, Result};

/// The four query games on `G'_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameId {
    /// Any string may be sent; replies carry colors.
    Original = 1,
    /// Only the entrance or names already received; replies carry colors.
    Tree = 2,
    /// As `Tree`, without colors.
    NoColors = 3,
    /// As `NoColors`; seeing a cycle also wins.
    NoCycles = 4,
}

impl GameId {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(GameId::Original),
            2 => Ok(GameId::Tree),
            3 => Ok(GameId::NoColors),
            4 => Ok(GameId::NoCycles),
            _ => Err(Error::param("game", format!("{k} not in 1..=4"))),
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }

    fn colored(self) -> bool {
        matches!(self, GameId::Original | GameId::Tree)
    }

    fn restricted(self) -> bool {
        self != GameId::Original
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reply {
    /// Sorted by name.
    Neighbors(Vec<Neighbor>),
    /// The string names no vertex (`11...1`).
    NotAVertex,
    /// Not allowed in this game: neither the entrance nor a received name.
    Rejected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WinCause {
    ExitFound,
    CycleFound,
    ImproperEmbedding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub game: u8,
    pub queries: u64,
    pub win: Option<WinCause>,
    /// First 16 hex digits of a SHA-256 over queries and replies.
    pub digest: String,
    pub seed: u64,
    /// Deepest column among queried vertices.
    pub deepest_column: u32,
    /// Whether the exit's name appeared in some reply.
    pub exit_revealed: bool,
}

impl GameResult {
    pub fn won(&self) -> bool {
        self.win.is_some()
    }
}

/// One answered query with the vertex ids behind it (kept for replays).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub query: VertexName,
    pub vertex: Option<u64>,
    pub reply: Reply,
    pub neighbor_ids: Vec<u64>,
}

struct Forest {
    index: HashMap<u64, usize>,
    parent: Vec<usize>,
}

impl Forest {
    fn find(&mut self, v: u64) -> usize {
        let next = self.index.len();
        let mut i = *self.index.entry(v).or_insert(next);
        if i == self.parent.len() {
            self.parent.push(i);
        }
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// False when `u` and `v` were already connected.
    fn union(&mut self, u: u64, v: u64) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        self.parent[a] = b;
        a != b
    }
}

/// Play one game with at most `budget` queries. Rejected and unanswerable
/// queries still count.
pub fn play_game<G, A>(
    game: GameId,
    adversary: &mut A,
    graph: &mut G,
    budget: u64,
    rng: &mut Stream,
    seed: u64,
) -> GameResult
where
    G: NamedGraph + ?Sized,
    A: Adversary + ?Sized,
{
    play(game, adversary, graph, budget, rng, seed, None)
}

/// As [`play_game`], also returning the transcript.
pub fn play_game_traced<G, A>(
    game: GameId,
    adversary: &mut A,
    graph: &mut G,
    budget: u64,
    rng: &mut Stream,
    seed: u64,
) -> (GameResult, Vec<TranscriptEntry>)
where
    G: NamedGraph + ?Sized,
    A: Adversary + ?Sized,
{
    let mut t = Vec::new();
    let r = play(game, adversary, graph, budget, rng, seed, Some(&mut t));
    (r, t)
}

fn play<G, A>(
    game: GameId,
    adversary: &mut A,
    graph: &mut G,
    budget: u64,
    rng: &mut Stream,
    seed: u64,
    mut trace: Option<&mut Vec<TranscriptEntry>>,
) -> GameResult
where
    G: NamedGraph + ?Sized,
    A: Adversary + ?Sized,
{
    let entrance = graph.entrance();
    let exit = graph.exit();
    let entrance_name = graph.name_of_vertex(entrance);
    let exit_name = graph.name_of_vertex(exit);
    let mut seen: HashSet<VertexName> = HashSet::from([entrance_name]);
    let mut edges: HashSet<(u64, u64)> = HashSet::new();
    let mut forest = Forest {
        index: HashMap::new(),
        parent: Vec::new(),
    };
    let mut hasher = Sha256::new();
    let mut result = GameResult {
        game: game.number(),
        queries: 0,
        win: None,
        digest: String::new(),
        seed,
        deepest_column: 0,
        exit_revealed: false,
    };

    adversary.start(entrance_name);
    while result.queries < budget {
        let Some(q) = adversary.next_query(rng) else {
            break;
        };
        result.queries += 1;
        hasher.update(q.bits().to_le_bytes());
        let allowed = !game.restricted() || seen.contains(&q);
        let vertex = if allowed { graph.resolve(q) } else { None };
        if let Some(v) = vertex {
            result.deepest_column = result.deepest_column.max(graph.column_of(v));
        }
        if q == exit_name && allowed {
            result.win = Some(WinCause::ExitFound);
            break;
        }
        let mut ids = Vec::new();
        let reply = match vertex {
            _ if !allowed => Reply::Rejected,
            None => Reply::NotAVertex,
            Some(v) => {
                let mut nb: Vec<(Neighbor, u64)> = graph
                    .neighbors_of(v)
                    .into_iter()
                    .map(|u| {
                        let color = game.colored().then(|| graph.edge_color(v, u));
                        (
                            Neighbor {
                                name: graph.name_of_vertex(u),
                                color,
                            },
                            u,
                        )
                    })
                    .collect();
                nb.sort();
                for &(x, u) in &nb {
                    seen.insert(x.name);
                    result.exit_revealed |= u == exit;
                    if game == GameId::NoCycles
                        && edges.insert((v.min(u), v.max(u)))
                        && !forest.union(v, u)
                    {
                        result.win = Some(WinCause::CycleFound);
                    }
                }
                ids = nb.iter().map(|p| p.1).collect();
                Reply::Neighbors(nb.into_iter().map(|p| p.0).collect())
            }
        };
        match &reply {
            Reply::Neighbors(nb) => {
                for x in nb {
                    hasher.update(x.name.bits().to_le_bytes());
                    hasher.update([x.color.map_or(255, |c| c.index() as u8)]);
                }
            }
            Reply::NotAVertex => hasher.update([0xfe]),
            Reply::Rejected => hasher.update([0xfd]),
        }
        adversary.observe(q, &reply, rng);
        if let Some(t) = trace.as_deref_mut() {
            t.push(TranscriptEntry {
                query: q,
                vertex,
                reply,
                neighbor_ids: ids,
            });
        }
        if result.won() {
            break;
        }
    }
    let d = hasher.finalize();
    result.digest = d[..8].iter().map(|b| format!("{b:02x}")).collect();
    result
}

/// Independent draws for trial `i` of an experiment seeded by `seed`.
pub(crate) fn trial_graph(n: u32, seed: u64, i: u64) -> Result<LazyGluedTrees> {
    LazyGluedTrees::new(n, rng::derive_seed(seed, Artifact::Graph, i))
}

pub(crate) fn trial_rng(seed: u64, i: u64) -> Stream {
    rng::substream(seed, Artifact::Adversary, i)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameEstimate {
    pub game: u8,
    pub adversary: String,
    pub n: u32,
    pub budget: u64,
    pub rate: RateEstimate,
    pub exits: u64,
    pub cycles: u64,
    pub mean_queries: f64,
}

fn summarize(
    game: GameId,
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    results: &[GameResult],
) -> GameEstimate {
    let trials = results.len() as u64;
    let count = |c: WinCause| results.iter().filter(|r| r.win == Some(c)).count() as u64;
    GameEstimate {
        game: game.number(),
        adversary: kind.label().to_string(),
        n,
        budget,
        rate: RateEstimate::new(results.iter().filter(|r| r.won()).count() as u64, trials),
        exits: count(WinCause::ExitFound),
        cycles: count(WinCause::CycleFound),
        mean_queries: results.iter().map(|r| r.queries as f64).sum::<f64>() / trials.max(1) as f64,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < 100 {
        return Err(Error::param("trials", format!("{trials} is below 100")));
    }
    Ok(())
}

/// Monte-Carlo win rate over fresh graphs, names and colorings.
pub fn estimate_game(
    game: GameId,
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<GameEstimate> {
    check_trials(trials)?;
    let results = par_map(trials, |i| -> Result<GameResult> {
        let mut g = trial_graph(n, seed, i)?;
        let mut a = kind.build(n, g.name_width());
        Ok(play_game(
            game,
            &mut a,
            &mut g,
            budget,
            &mut trial_rng(seed, i),
            seed,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(summarize(game, kind, n, budget, &results))
}

/// Unrestricted play versus the same algorithm limited to received names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub original: GameEstimate,
    pub restricted: GameEstimate,
    /// `t (2^{n+2} - 2) / 2^{2n}`, the chance of discovering an unseen name.
    pub slack: f64,
    pub holds: bool,
}

pub fn discovery_slack(n: u32, budget: u64) -> f64 {
    budget as f64 * (2f64.powi(n as i32 + 2) - 2.0) / 2f64.powi(2 * n as i32)
}

pub fn check_restriction(
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<RestrictionCheck> {
    check_trials(trials)?;
    let original = estimate_game(GameId::Original, kind, n, budget, trials, seed)?;
    let results = par_map(trials, |i| -> Result<GameResult> {
        let mut g = trial_graph(n, seed, i)?;
        let mut a = RestrictToSeen::new(kind.build(n, g.name_width()), budget);
        Ok(play_game(
            GameId::Tree,
            &mut a,
            &mut g,
            budget,
            &mut trial_rng(seed, i),
            seed,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let restricted = summarize(GameId::Tree, kind, n, budget, &results);
    let slack = discovery_slack(n, budget);
    let sigma = original.rate.sigma().hypot(restricted.rate.sigma());
    let holds = original.rate.rate <= restricted.rate.rate + slack + 3.0 * sigma;
    Ok(RestrictionCheck {
        original,
        restricted,
        slack,
        holds,
    })
}

/// Colored play versus the same algorithm fed made-up colors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringCheck {
    pub colored: GameEstimate,
    pub made_up: GameEstimate,
    pub z: f64,
    pub holds: bool,
}

pub fn check_made_up_colors(
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<ColoringCheck> {
    check_trials(trials)?;
    let colored = estimate_game(GameId::Tree, kind, n, budget, trials, seed)?;
    let other = seed ^ 0x5eed_c010;
    let results = par_map(trials, |i| -> Result<GameResult> {
        let mut g = trial_graph(n, other, i)?;
        let mut a = MadeUpColors::new(kind.build(n, g.name_width()));
        Ok(play_game(
            GameId::NoColors,
            &mut a,
            &mut g,
            budget,
            &mut trial_rng(other, i),
            other,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let made_up = summarize(GameId::NoColors, kind, n, budget, &results);
    let z = two_proportion_z(&colored.rate, &made_up.rate);
    Ok(ColoringCheck {
        colored,
        made_up,
        z,
        holds: z <= 3.0,
    })
}

/// Game 3 against game 4 on identical draws: every game-3 win must also be
/// a game-4 win.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRuleCheck {
    pub no_colors: GameEstimate,
    pub no_cycles: GameEstimate,
    pub violations: u64,
}

pub fn check_cycle_rule(
    kind: AdversaryKind,
    n: u32,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<CycleRuleCheck> {
    check_trials(trials)?;
    let pairs = par_map(trials, |i| -> Result<(GameResult, GameResult)> {
        let run = |game| -> Result<GameResult> {
            let mut g = trial_graph(n, seed, i)?;
            let mut a = kind.build(n, g.name_width());
            Ok(play_game(
                game,
                &mut a,
                &mut g,
                budget,
                &mut trial_rng(seed, i),
                seed,
            ))
        };
        Ok((run(GameId::NoColors)?, run(GameId::NoCycles)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (r3, r4): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let violations = r3
        .iter()
        .zip(&r4)
        .filter(|(a, b)| a.won() && !b.won())
        .count() as u64;
    Ok(CycleRuleCheck {
        no_colors: summarize(GameId::NoColors, kind, n, budget, &r3),
        no_cycles: summarize(GameId::NoCycles, kind, n, budget, &r4),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::oracle::{GluedTrees, GraphView};

    fn lazy(n: u32, seed: u64) -> LazyGluedTrees {
        LazyGluedTrees::new(n, seed).unwrap()
    }

    #[test]
    fn zero_budget_loses() {
        for kind in AdversaryKind::ALL {
            for game in [
                GameId::Original,
                GameId::Tree,
                GameId::NoColors,
                GameId::NoCycles,
            ] {
                let mut g = lazy(4, 1);
                let mut a = kind.build(4, g.name_width());
                let r = play_game(game, &mut a, &mut g, 0, &mut trial_rng(1, 0), 1);
                assert!(!r.won() && r.queries == 0);
            }
        }
    }

    #[test]
    fn every_adversary_respects_budget_in_game_four() {
        for kind in AdversaryKind::ALL {
            for s in 0..20 {
                let mut g = lazy(6, s);
                let mut a = kind.build(6, g.name_width());
                let r = play_game(
                    GameId::NoCycles,
                    &mut a,
                    &mut g,
                    40,
                    &mut trial_rng(s, 0),
                    s,
                );
                assert!(r.queries <= 40, "{}", kind.label());
            }
        }
    }

    #[test]
    fn restricted_games_reject_unseen_names() {
        let mut g = lazy(5, 3);
        let mut a = AdversaryKind::RandomGuesser.build(5, g.name_width());
        let (r, t) = play_game_traced(GameId::Tree, &mut a, &mut g, 30, &mut trial_rng(3, 0), 3);
        assert_eq!(r.queries, 30);
        assert!(t.iter().all(|e| e.reply == Reply::Rejected));
    }

    #[test]
    fn replies_carry_colors_only_in_colored_games() {
        for (game, colored) in [(GameId::Tree, true), (GameId::NoColors, false)] {
            let mut g = lazy(4, 2);
            let mut a = AdversaryKind::DepthFirst.build(4, g.name_width());
            let (_, t) = play_game_traced(game, &mut a, &mut g, 5, &mut trial_rng(2, 0), 2);
            for e in &t {
                if let Reply::Neighbors(nb) = &e.reply {
                    assert!(nb.iter().all(|x| x.color.is_some() == colored));
                }
            }
        }
    }

    #[test]
    fn depth_first_wins_on_small_explicit_graph() {
        // Exhaustive search of G'_2 (14 vertices) must reach the exit.
        let g = GluedTrees::standard(2, 5).unwrap();
        let mut view = &g;
        let mut a = AdversaryKind::DepthFirst.build(2, view.name_width());
        let r = play_game(
            GameId::NoColors,
            &mut a,
            &mut view,
            100,
            &mut trial_rng(5, 0),
            5,
        );
        assert_eq!(r.win, Some(WinCause::ExitFound));
        let _ = Arc::new(g);
    }

    #[test]
    fn cycles_are_detected_in_game_four() {
        let mut wins = 0;
        for s in 0..50 {
            let mut g = lazy(2, s);
            let mut a = AdversaryKind::DepthFirst.build(2, g.name_width());
            let r = play_game(
                GameId::NoCycles,
                &mut a,
                &mut g,
                100,
                &mut trial_rng(s, 0),
                s,
            );
            wins += u32::from(r.win == Some(WinCause::CycleFound));
        }
        assert!(wins > 40, "{wins}");
    }

    #[test]
    fn non_backtracking_walker_crosses_the_left_tree() {
        let n = 8;
        let mut reached = 0;
        for s in 0..200 {
            let mut g = lazy(n, s);
            let mut a = AdversaryKind::NonBacktracking.build(n, g.name_width());
            let r = play_game(
                GameId::NoColors,
                &mut a,
                &mut g,
                10 * n as u64,
                &mut trial_rng(s, 0),
                s,
            );
            reached += u32::from(r.deepest_column >= n + 1);
        }
        assert_eq!(reached, 200);
    }

    #[test]
    fn transcripts_are_reproducible() {
        let run = || {
            let mut g = lazy(6, 9);
            let mut a = AdversaryKind::UniformWalker.build(6, g.name_width());
            play_game(GameId::Tree, &mut a, &mut g, 25, &mut trial_rng(9, 0), 9)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn estimates_reject_few_trials() {
        assert!(estimate_game(GameId::NoCycles, AdversaryKind::DepthFirst, 6, 8, 99, 0).is_err());
    }

    #[test]
    fn guessing_stays_under_discovery_slack() {
        let c = check_restriction(AdversaryKind::RandomGuesser, 8, 64, 2000, 4).unwrap();
        assert!(c.holds, "{c:?}");
        assert!((discovery_slack(16, 1024) - 1024.0 * 262_142.0 / 4_294_967_296.0).abs() < 1e-15);
    }

    #[test]
    fn made_up_colors_are_indistinguishable() {
        let c = check_made_up_colors(AdversaryKind::ColorFollower, 3, 12, 4000, 7).unwrap();
        assert!(c.colored.rate.rate > 0.05, "{c:?}");
        assert!(c.holds, "{c:?}");
    }

    #[test]
    fn cycle_rule_is_pointwise() {
        for kind in AdversaryKind::ALL {
            let c = check_cycle_rule(kind, 4, 30, 300, 11).unwrap();
            assert_eq!(c.violations, 0, "{}", kind.label());
            assert!(c.no_cycles.rate.rate >= c.no_colors.rate.rate);
        }
    }

    #[test]
    fn explicit_and_lazy_views_agree_on_shape() {
        let g = GluedTrees::standard(3, 1).unwrap();
        let mut v = &g;
        let l = lazy(3, 1);
        assert_eq!(
            (GraphView::entrance(&v), GraphView::exit(&v)),
            (l.entrance(), l.exit())
        );
        assert_eq!(v.neighbors_of(0).len(), 2);
    }
}
