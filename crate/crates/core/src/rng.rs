//! Seeded random streams.
//!
//! Every randomized routine derives an independent ChaCha stream from the
//! master seed and a stream index, so samples can be drawn in any order (and
//! on any thread) without changing their values.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `index` under master `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream index namespaced by a routine tag, so that different routines
/// sharing a master seed never reuse a stream.
pub fn tagged(tag: u32, index: u64) -> u64 {
    ((tag as u64) << 48) ^ index
}

pub(crate) mod tag {
    pub const ESTIMATE: u32 = 1;
    pub const CERTIFY: u32 = 2;
    pub const DENSITY: u32 = 3;
    pub const DISTORTION: u32 = 4;
    pub const STABLE: u32 = 5;
    pub const UNCONDITIONAL: u32 = 6;
    pub const RADEMACHER: u32 = 7;
    pub const INSTANCE: u32 = 8;
    pub const SUBSEED: u32 = 9;
}

/// A child seed for component `k` of an experiment (e.g. one realization).
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    stream(seed, tagged(tag::SUBSEED, k)).next_u64()
}

/// A random direction for probing norm ratios: with probability 1/2 a
/// Gaussian vector, otherwise a sparse vector with one to three spikes of
/// random sign and magnitude. Sparse draws hit extremal coordinate
/// directions that Gaussian draws almost never reach.
pub fn probe_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    if rng.gen_bool(0.5) {
        for x in v.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
    } else {
        let spikes = rng.gen_range(1..=dim.min(3));
        for _ in 0..spikes {
            let i = rng.gen_range(0..dim);
            let mag: f64 = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(0.1..1.0)
            };
            v[i] = if rng.gen_bool(0.5) { mag } else { -mag };
        }
    }
    if v.iter().all(|&x| x == 0.0) {
        v[0] = 1.0;
    }
    v
}
