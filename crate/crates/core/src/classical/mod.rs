//! The classical side: the continuous-time random walk, polynomial
//! traversals of `G_n` and the hypercube, and the query games behind the
//! lower bound, played by a catalog of baseline adversaries.

mod adversary;
mod embedding;
mod games;
mod master;
mod stats;
mod traverse;

pub use adversary::{adversary_catalog, Adversary, AdversaryKind, MadeUpColors, RestrictToSeen};
pub use embedding::{
    embed_with_coins, estimate_embedding_game, random_embedding, replay_check, transcript_tree,
    Embedding, EmbeddingEstimate, ReplayCheck, ReplayedTree, RootedBinaryTree, TreeFamily,
};
pub use games::{
    check_cycle_rule, check_made_up_colors, check_restriction, discovery_slack, estimate_game,
    play_game, play_game_traced, ColoringCheck, CycleRuleCheck, GameEstimate, GameId, GameResult,
    Reply, RestrictionCheck, TranscriptEntry, WinCause,
};
pub use master::{classical_master_evolve, ClassicalGenerator};
pub use stats::{
    fit_quadratic, two_proportion_z, wilson_interval, QuadraticFit, RateEstimate, Z99,
};
pub use traverse::{
    traverse_gn, traverse_hypercube, GnWalker, NeighborOracle, TraversalOutcome, WalkerStep,
};

/// `f(0), ..., f(count - 1)` in index order, on the worker pool when the
/// `parallel` feature is on.
pub(crate) fn par_map<T: Send>(count: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
