#![allow(dead_code)]

use hitchin_core::rep::{build_octagon_fuchsian, sym_power_lift, SurfaceRep};
use hitchin_core::word::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Octagon point lifted to dimension `n` (`n = 2` is the octagon itself).
pub fn fuchsian(n: usize) -> SurfaceRep {
    let base = build_octagon_fuchsian();
    if n == 2 {
        base
    } else {
        sym_power_lift(&base, n).unwrap()
    }
}

/// Random cyclically reduced nonempty word with length in `min..=max`.
pub fn random_word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Word {
    loop {
        let len = rng.random_range(min..=max);
        let raw: Vec<Letter> = (0..len).map(|_| Letter::from_index(rng.random_range(0..8))).collect();
        let w = raw.into_iter().collect::<Word>().cyclically_reduce();
        if !w.is_empty() {
            return w;
        }
    }
}
