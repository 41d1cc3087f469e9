//! Seeded substreams.
//!
//! Every stochastic routine takes a master seed and derives one ChaCha
//! stream per independent unit of work (trial, sample, attempt). A unit's
//! randomness depends only on `(seed, domain, index)`, never on execution
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domains keep unrelated consumers of the same master seed apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Terracini = 1,
    TangentDim = 2,
    Fit = 3,
    Anchor = 4,
    BinarySample = 5,
    TensorSample = 6,
    RealPoints = 7,
    RootSlices = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for unit `index` of `domain` under `seed`.
pub fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(domain as u64)));
    rng.set_stream(index);
    rng
}
