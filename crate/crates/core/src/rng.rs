//! Seeded random streams. Every stochastic routine takes an explicit seed and
//! derives one independent stream per work item.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}
