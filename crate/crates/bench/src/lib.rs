//! Deterministic inputs shared by the benchmarks.

use ergodic_core::sample::random_table;
use ergodic_core::{FunctionTable, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn words(seed: u64, n: usize) -> Vec<u64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random()).collect()
}

/// A polynomial with exactly `limbs` 64-bit limbs.
pub fn poly(seed: u64, limbs: usize) -> Poly {
    let mut w = words(seed, limbs);
    if let Some(top) = w.last_mut() {
        *top |= 1 << 63;
    }
    Poly::from_limbs(w)
}

pub fn table(seed: u64, k: u32) -> FunctionTable {
    random_table(&mut rng(seed), k).expect("valid precision")
}
