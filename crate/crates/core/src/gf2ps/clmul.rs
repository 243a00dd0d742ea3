//! Carry-less (XOR-accumulate) multiplication of 64-bit words.
//!
//! On x86-64 with `pclmulqdq` the hardware instruction is used; everywhere
//! else a 4-bit windowed table method computes the same 128-bit product.

/// Full 128-bit carry-less product of two words.
#[inline]
pub fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if hardware() {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_portable(a, b)
}

/// Whether [`clmul64`] uses a carry-less multiply instruction.
#[inline]
pub(crate) fn hardware() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Low 64 bits of the carry-less product.
#[inline]
pub fn clmul64_lo(a: u64, b: u64) -> u64 {
    clmul64(a, b) as u64
}

/// Table-driven carry-less product, four bits of `b` per step.
pub fn clmul64_portable(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    table[1] = a;
    for i in 2..16 {
        table[i] = if i & 1 == 0 {
            table[i >> 1] << 1
        } else {
            table[i - 1] ^ a
        };
    }
    let mut acc = 0u128;
    for nibble in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * nibble)) & 0xf) as usize];
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x};
    let r = _mm_clmulepi64_si128(
        _mm_set_epi64x(0, a as i64),
        _mm_set_epi64x(0, b as i64),
        0x00,
    );
    // __m128i and u128 share size; lane 0 is the low half on little-endian x86.
    std::mem::transmute::<_, u128>(r)
}

/// Shift-and-xor product for operands whose product fits in 64 bits.
/// Cheaper than the table method when `b` has few bits.
#[inline]
pub fn clmul_small(mut a: u64, mut b: u64) -> u64 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}
