//! Seeded randomness. Every randomized routine takes a `u64` seed and derives
//! a ChaCha8 stream from it, so results do not depend on platform or schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

pub type Rng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for sub-task `stream` of a master seed (splitmix64 finaliser).
pub fn derive(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normal_vec(rng: &mut Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

pub fn complex_normal(rng: &mut Rng) -> C64 {
    C64::new(normal(rng), normal(rng))
}

pub fn complex_normal_vec(rng: &mut Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Uniform phase e^{iθ}, θ ∈ [0, 2π).
pub fn phase(rng: &mut Rng) -> C64 {
    use rand::Rng as _;
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    C64::from_polar(1.0, theta)
}
