//! Seeded random streams.
//!
//! Every random artifact (graph wiring, names, colors, embeddings, trial
//! draws) gets its own ChaCha stream derived from the experiment seed, so
//! changing how many draws one stage makes never perturbs another.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type Stream = ChaCha12Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Artifact {
    Graph = 1,
    Names = 2,
    Coloring = 3,
    Embedding = 4,
    Adversary = 5,
    Trial = 6,
    Sampling = 7,
    Packet = 8,
}

/// SplitMix64 finalizer; a bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream(seed: u64, artifact: Artifact) -> Stream {
    let mut rng = Stream::seed_from_u64(seed);
    rng.set_stream(artifact as u64);
    rng
}

/// Stream for the `index`-th repetition of an artifact, e.g. one Monte-Carlo
/// trial. Independent of how many other indices are drawn.
pub fn substream(seed: u64, artifact: Artifact, index: u64) -> Stream {
    let mut rng = Stream::seed_from_u64(mix64(seed ^ mix64(index.wrapping_add(1))));
    rng.set_stream(artifact as u64);
    rng
}

/// Derived seed for a sub-artifact, recorded alongside results.
pub fn derive_seed(seed: u64, artifact: Artifact, index: u64) -> u64 {
    mix64(mix64(seed ^ (artifact as u64).rotate_left(32)) ^ index)
}
