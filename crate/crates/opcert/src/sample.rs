//! Counter-based deterministic sampling.
//!
//! Sample `k` is generated from `(seed, k)` alone: the generator is a
//! ChaCha8 stream cipher seeded by `seed` with the stream id set to `k`.
//! Parallel sweeps can therefore draw samples in any partition order and
//! reproduce the exact sequence a sequential run would produce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Region, Vec2};

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of `region`, keyed on (seed, index).
pub fn point_in(region: &Region, seed: u64, index: u64) -> Vec2 {
    let mut rng = stream(seed, index);
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    Vec2::new(
        region.xmin + u * region.width(),
        region.ymin + v * region.height(),
    )
}

/// Uniform pair of points of `region`, keyed on (seed, index).
pub fn pair_in(region: &Region, seed: u64, index: u64) -> (Vec2, Vec2) {
    let mut rng = stream(seed, index);
    let mut coord = |lo: f64, w: f64| lo + rng.random::<f64>() * w;
    let z = Vec2::new(
        coord(region.xmin, region.width()),
        coord(region.ymin, region.height()),
    );
    let z2 = Vec2::new(
        coord(region.xmin, region.width()),
        coord(region.ymin, region.height()),
    );
    (z, z2)
}

/// Uniform f64 in [lo, hi), keyed on (seed, index); extra draws come from
/// the same stream.
pub fn uniform(seed: u64, index: u64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, index);
    (0..n).map(|_| lo + rng.random::<f64>() * (hi - lo)).collect()
}
