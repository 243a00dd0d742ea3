//! Polynomial and truncated power-series arithmetic over F2.
//!
//! Everything uses one encoding: bit `i` is the coefficient of `T^i`, so the
//! canonical integer of `1 + T + T^3` is `0xB`. [`Residue`] is an element of
//! `F2[[T]]/T^k` held in a machine word (`k <= 64`); [`Poly`] is an exact
//! element of `F2[T]` of any degree.

mod clmul;
mod poly;
mod residue;

use std::cmp::Ordering;
use std::fmt;

pub use clmul::{clmul64, clmul64_lo, clmul64_portable, clmul_small};
pub use poly::Poly;
pub use residue::{mul_trunc, Residue, MAX_PRECISION};

use crate::error::{Error, Result};

/// `T`-adic order of an element; the zero element has infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    /// `2^-ord`, or 0 for the zero element. Exact in `f64` for all orders used here.
    pub fn abs(self) -> f64 {
        match self {
            Valuation::Finite(v) => (-(v as f64)).exp2(),
            Valuation::Infinite => 0.0,
        }
    }

    /// True when the order is at least `bound`.
    pub fn at_least(self, bound: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Degree in `T`. The zero polynomial has degree `-inf`, which sorts below
/// every finite degree, so 0 belongs to every `A_{<n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u64),
}

impl Degree {
    /// Degree of the polynomial with canonical integer `m`.
    pub fn of_index(m: u64) -> Degree {
        if m == 0 {
            Degree::NegInfinity
        } else {
            Degree::Finite(63 - m.leading_zeros() as u64)
        }
    }
}

/// Degree of a nonzero index, `floor(log2 m)`.
#[inline]
pub(crate) fn ilog2(m: u64) -> u32 {
    debug_assert!(m != 0);
    63 - m.leading_zeros()
}

fn strip_hex_prefix(s: &str) -> Result<&str> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("not a hex value: {s:?}")));
    }
    Ok(digits)
}

/// Parses a hex word, with or without a `0x` prefix.
pub fn parse_hex_u64(s: &str) -> Result<u64> {
    let digits = strip_hex_prefix(s)?;
    let digits = digits.trim_start_matches('0');
    if digits.is_empty() {
        return Ok(0);
    }
    u64::from_str_radix(digits, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

pub fn format_hex(bits: u64) -> String {
    format!("{bits:#x}")
}
