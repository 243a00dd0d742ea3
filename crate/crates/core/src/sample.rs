//! Random test objects.
//!
//! Uniform Van der Put coefficients almost never give bijective or
//! transitive tables once `k` grows, so the samplers below draw from a
//! mixture: coefficients that satisfy a criterion at every level, and the
//! same coefficients with one condition broken at a random place.

use rand::Rng;

use crate::carlitz::CarlitzCoefficients;
use crate::dynamics::FunctionTable;
use crate::error::Result;
use crate::gf2ps::ilog2;
use crate::vanderput::VdpCoefficients;
use crate::z2compare::Z2VdpCoefficients;

/// What the sampled coefficients are built to satisfy before corruption.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Uniform scaled coefficients: compatible, nothing more.
    Compatible,
    MeasurePreserving,
    Ergodic,
}

fn deg(alpha: u64) -> u32 {
    if alpha <= 1 {
        0
    } else {
        ilog2(alpha)
    }
}

/// An arbitrary table, entries uniform.
pub fn random_table(rng: &mut impl Rng, k: u32) -> Result<FunctionTable> {
    let m = (1u64 << k) - 1;
    FunctionTable::new(k, (0..=m).map(|_| rng.random::<u64>() & m).collect())
}

/// Scaled coefficients `b_alpha` over `F2[[T]]` (bit patterns, reduced later).
fn scaled_f2(rng: &mut impl Rng, k: u32, target: Target) -> Vec<u64> {
    let size = 1usize << k;
    let mut b: Vec<u64> = (0..size).map(|_| rng.random()).collect();
    if target == Target::Compatible {
        return b;
    }
    for v in b.iter_mut().skip(2) {
        *v |= 1;
    }
    // b_0 + b_1 = 1 mod T
    b[1] = (b[1] & !1) | ((b[0] & 1) ^ 1);
    if target == Target::Ergodic {
        b[0] |= 1;
        // b_0 + b_1 = 1 + T mod T^2
        b[1] = (b[1] & !0b11) | ((b[0] ^ 0b11) & 0b11);
        // sum over each degree block = T mod T^2; the block n = 2 is b_T + b_{1+T}
        for n in 2..=k {
            let lo = 1usize << (n - 1);
            let hi = (1usize << n) - 1;
            let s = b[lo..hi].iter().fold(0, |s, v| s ^ v);
            b[hi] = (b[hi] & !0b11) | ((s ^ 0b10) & 0b10) | 1;
        }
    }
    b
}

/// Breaks one condition of `target` at a random place.
fn corrupt_f2(rng: &mut impl Rng, k: u32, target: Target, b: &mut [u64]) {
    let size = b.len() as u64;
    match rng.random_range(0..4u32) {
        // a non-unit b_alpha
        0 if size > 2 => b[rng.random_range(2..size) as usize] ^= 1,
        // the base congruence on b_0, b_1
        1 => b[rng.random_range(0..2usize)] ^= if target == Target::Ergodic { 0b10 } else { 1 },
        // a block sum, visible only for ergodicity
        2 if target == Target::Ergodic && k >= 2 => b[rng.random_range(2..size) as usize] ^= 0b10,
        _ => b[0] ^= 1,
    }
}

/// Compatible coefficients over `F2[[T]]` aimed at `target`; with
/// probability one half a condition is broken afterwards.
pub fn random_vdp(rng: &mut impl Rng, k: u32, target: Target) -> Result<VdpCoefficients> {
    let mut b = scaled_f2(rng, k, target);
    if target != Target::Compatible && rng.random_bool(0.5) {
        corrupt_f2(rng, k, target, &mut b);
    }
    VdpCoefficients::from_scaled(k, |alpha| b[alpha as usize])
}

/// Scaled coefficients over `Z2`.
fn scaled_z2(rng: &mut impl Rng, k: u32, target: Target) -> Vec<u64> {
    let size = 1usize << k;
    let mut b: Vec<u64> = (0..size).map(|_| rng.random()).collect();
    if target == Target::Compatible {
        return b;
    }
    for v in b.iter_mut().skip(2) {
        *v |= 1;
    }
    // b_0 + b_1 odd
    if b[0].wrapping_add(b[1]) & 1 == 0 {
        b[1] ^= 1;
    }
    if target == Target::Ergodic {
        b[0] |= 1;
        // b_0 + b_1 = 3 mod 4
        b[1] = b[1].wrapping_add(3u64.wrapping_sub(b[0].wrapping_add(b[1])) & 0b11);
        // b_2 + b_3 = 2 mod 4; blocks n >= 3 sum to 0 mod 4
        for n in 2..=k {
            let lo = 1usize << (n - 1);
            let hi = (1usize << n) - 1;
            let want = if n == 2 { 2 } else { 0 };
            let s = b[lo..=hi].iter().fold(0u64, |s, &v| s.wrapping_add(v));
            // adding 2 keeps b_hi odd
            if s.wrapping_sub(want) & 0b11 != 0 {
                b[hi] = b[hi].wrapping_add(2);
            }
        }
    }
    b
}

pub fn random_vdp_z2(rng: &mut impl Rng, k: u32, target: Target) -> Result<Z2VdpCoefficients> {
    let mut b = scaled_z2(rng, k, target);
    if target != Target::Compatible && rng.random_bool(0.5) {
        let size = b.len() as u64;
        match rng.random_range(0..3u32) {
            0 if size > 2 => b[rng.random_range(2..size) as usize] ^= 1,
            1 if size > 2 => b[rng.random_range(2..size) as usize] ^= 0b10,
            _ => b[rng.random_range(0..2usize)] ^= rng.random_range(1..4u64),
        }
    }
    Z2VdpCoefficients::from_scaled(k, |m| b[m as usize])
}

/// Carlitz coefficients meeting the ergodicity conditions at every level,
/// obtained by perturbing `1 + (1+T)x + sum T^n G_{2^n-1}(x)` by terms of
/// higher order.
pub fn perturbed_example(rng: &mut impl Rng, k: u32) -> Result<CarlitzCoefficients> {
    let mask = |v: u64| if k >= 64 { v } else { v & ((1u64 << k) - 1) };
    let size = 1u64 << k.min(crate::carlitz::MAX_CONTEXT_PRECISION);
    let mut pairs = Vec::new();
    pairs.push((0, mask(1 ^ (rng.random::<u64>() << 1))));
    pairs.push((1, mask(0b11 ^ (rng.random::<u64>() << 2))));
    for n in 2..size {
        let d = deg(n);
        let a = if (n + 1).is_power_of_two() {
            // a_{2^j - 1} = T^j mod T^{j+1}
            (1u64 << (d + 1)) ^ rng.random::<u64>().checked_shl(d + 2).unwrap_or(0)
        } else if rng.random_bool(0.25) {
            rng.random::<u64>().checked_shl(d + 1).unwrap_or(0)
        } else {
            0
        };
        let a = mask(a);
        if a != 0 {
            pairs.push((n, a));
        }
    }
    CarlitzCoefficients::from_pairs(k, None, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::{check_ergodic_carlitz, check_lipschitz_carlitz};
    use crate::vanderput::{check_ergodic_vdp, check_lipschitz_vdp, check_mp_vdp};
    use crate::z2compare::{check_compatible_z2, check_ergodic_z2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_cover_both_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut mp, mut erg, mut erg_z2) = ([0; 2], [0; 2], [0; 2]);
        for _ in 0..200 {
            let c = random_vdp(&mut rng, 5, Target::MeasurePreserving).unwrap();
            assert!(check_lipschitz_vdp(&c));
            mp[check_mp_vdp(&c).unwrap().holds() as usize] += 1;
            let c = random_vdp(&mut rng, 5, Target::Ergodic).unwrap();
            erg[check_ergodic_vdp(&c).unwrap().holds() as usize] += 1;
            let c = random_vdp_z2(&mut rng, 5, Target::Ergodic).unwrap();
            assert!(check_compatible_z2(&c));
            erg_z2[check_ergodic_z2(&c).unwrap().holds() as usize] += 1;
        }
        for counts in [mp, erg, erg_z2] {
            assert!(counts[0] > 20 && counts[1] > 20, "{counts:?}");
        }
    }

    #[test]
    fn perturbed_examples_are_ergodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 1..=10 {
            let c = perturbed_example(&mut rng, k).unwrap();
            assert!(check_lipschitz_carlitz(&c));
            assert!(check_ergodic_carlitz(&c).unwrap().holds(), "k = {k}");
        }
    }
}
