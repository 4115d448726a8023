//! Seeded sample points for pointwise operator comparison.
//!
//! Momentum components are uniform in [−2, 2] (points with |p| < 10⁻³ are
//! redrawn); the mass alternates between 1.0 and 1.7 and the time between
//! 0.0 and 0.6, so every sample set exercises both values of each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Sample;

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_COUNT: usize = 20;
pub const MIN_MOMENTUM: f64 = 1e-3;

const MASSES: [f64; 2] = [1.0, 1.7];
const TIMES: [f64; 2] = [0.0, 0.6];

fn draw_momentum(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let p = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        if p.iter().map(|x| x * x).sum::<f64>().sqrt() >= MIN_MOMENTUM {
            return p;
        }
    }
}

/// `count` massive samples from `seed`.
pub fn massive(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| Sample::new(draw_momentum(&mut rng), MASSES[k % 2], TIMES[(k / 2) % 2]))
        .collect()
}

/// The default set: 20 points from seed `0x5EED`.
pub fn default_samples() -> Vec<Sample> {
    massive(DEFAULT_SEED, DEFAULT_COUNT)
}

/// Samples with `m = 0` (so `E = |p|`).
pub fn massless(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|k| Sample::new(draw_momentum(&mut rng), 0.0, TIMES[(k / 2) % 2])).collect()
}
