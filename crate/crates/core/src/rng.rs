//! Seed splitting.
//!
//! Every independent unit of work (a sampling batch, one evolution run, one
//! Kolmogorov attempt) draws from its own ChaCha8 stream. The stream is
//! selected by the master seed plus a short path of integers naming the unit,
//! e.g. `[TAG_EVOLVE, phenotype_key, run]`. Streams therefore never depend on
//! thread scheduling or on how many units other tasks consumed, which makes
//! results independent of the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::phenotype::Phenotype;

pub type Stream = ChaCha8Rng;

pub const TAG_SAMPLE: u64 = 1;
pub const TAG_EVOLVE: u64 = 2;
pub const TAG_SAMPLING_SOURCE: u64 = 3;
pub const TAG_KOLMOGOROV: u64 = 4;
pub const TAG_WALK: u64 = 5;
pub const TAG_PHENOTYPE_DRAW: u64 = 6;
pub const TAG_GENOTYPE_DRAW: u64 = 7;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id for a path. A single-element path `[i]` maps to the plain
/// split `split(master_seed, i)` with stream id `i`.
pub fn stream_id(path: &[u64]) -> u64 {
    match path {
        [i] => *i,
        _ => path
            .iter()
            .fold(0x6a09_e667_f3bc_c909, |h, &x| splitmix64(h ^ x)),
    }
}

pub fn stream(master_seed: u64, path: &[u64]) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id(path));
    rng
}

/// Folds a phenotype into a path element.
pub fn phenotype_key(p: &Phenotype) -> u64 {
    let b = p.bits();
    ((b as u64) ^ ((b >> 64) as u64).rotate_left(17)) ^ ((p.n_inputs() as u64) << 58)
}
