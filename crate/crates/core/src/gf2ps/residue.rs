use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use super::clmul::{self, clmul64_lo, clmul_small};
use super::{parse_hex_u64, Valuation};
use crate::error::{Error, Result};

/// Largest supported residue precision; residues live in a single word.
pub const MAX_PRECISION: u32 = 64;

#[inline]
pub(crate) fn mask(prec: u32) -> u64 {
    if prec >= 64 {
        u64::MAX
    } else {
        (1u64 << prec) - 1
    }
}

/// An element of F2[[T]] / T^k. Bit `i` is the coefficient of `T^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    bits: u64,
    prec: u32,
}

impl Residue {
    /// Builds a residue, rejecting bits at or above `prec`.
    pub fn new(bits: u64, prec: u32) -> Result<Self> {
        check_precision(prec)?;
        if bits & !mask(prec) != 0 {
            return Err(Error::OutOfRange { value: bits, prec });
        }
        Ok(Residue { bits, prec })
    }

    /// Builds a residue, discarding bits at or above `prec`.
    pub fn reduce(bits: u64, prec: u32) -> Result<Self> {
        check_precision(prec)?;
        Ok(Residue {
            bits: bits & mask(prec),
            prec,
        })
    }

    pub fn zero(prec: u32) -> Result<Self> {
        Residue::new(0, prec)
    }

    pub fn one(prec: u32) -> Result<Self> {
        Residue::new(1, prec)
    }

    /// Canonical integer encoding `sum bit_i 2^i`.
    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn precision(self) -> u32 {
        self.prec
    }

    /// Coefficient of `T^i`; zero for `i >= precision`.
    #[inline]
    pub fn coeff(self, i: u32) -> bool {
        i < self.prec && (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_unit(self) -> bool {
        self.bits & 1 == 1
    }

    pub fn checked_add(self, rhs: Residue) -> Result<Residue> {
        if self.prec != rhs.prec {
            return Err(Error::PrecisionMismatch(self.prec, rhs.prec));
        }
        Ok(Residue {
            bits: self.bits ^ rhs.bits,
            prec: self.prec,
        })
    }

    /// Carry-less product truncated to the common precision.
    pub fn checked_mul(self, rhs: Residue) -> Result<Residue> {
        if self.prec != rhs.prec {
            return Err(Error::PrecisionMismatch(self.prec, rhs.prec));
        }
        Ok(Residue {
            bits: mul_trunc(self.bits, rhs.bits, self.prec),
            prec: self.prec,
        })
    }

    /// Reduces to a lower (or equal) precision.
    pub fn truncate(self, prec: u32) -> Result<Residue> {
        if prec > self.prec {
            return Err(Error::InsufficientPrecision {
                need: prec,
                have: self.prec,
            });
        }
        Residue::reduce(self.bits, prec)
    }

    /// `T`-adic order; `Infinite` when the residue is zero at this precision
    /// (a reported finite order is always `< precision`).
    pub fn ord(self) -> Valuation {
        if self.bits == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.bits.trailing_zeros())
        }
    }

    /// `|x|_T = 2^-ord`, normalized so `|T| = 1/2`; zero for the zero residue.
    pub fn abs(self) -> f64 {
        self.ord().abs()
    }

    pub fn ord_abs(self) -> (Valuation, f64) {
        (self.ord(), self.abs())
    }

    /// Inverse of a unit modulo `T^k` by Newton iteration `y <- a y^2`.
    pub fn invert_unit(self) -> Result<Residue> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let k = self.prec;
        let mut y = 1u64;
        let mut good = 1u32;
        while good < k {
            let y2 = mul_trunc(y, y, k);
            y = mul_trunc(self.bits, y2, k);
            good *= 2;
        }
        Ok(Residue { bits: y, prec: k })
    }

    /// Exact division by `T^v`: the result has precision `k - v`.
    pub fn shr_exact(self, v: u32) -> Result<Residue> {
        if v >= self.prec {
            return Err(Error::InsufficientPrecision {
                need: v,
                have: self.prec,
            });
        }
        if self.bits & mask(v) != 0 {
            return Err(Error::InexactDivision);
        }
        Ok(Residue {
            bits: self.bits >> v,
            prec: self.prec - v,
        })
    }

    /// Divides by `T^v * u` for a unit `u` of precision `>= k - v`.
    pub fn div_monomial_unit(self, v: u32, unit: Residue) -> Result<Residue> {
        let q = self.shr_exact(v)?;
        let u = unit.truncate(q.prec)?;
        q.checked_mul(u.invert_unit()?)
    }

    /// Parses `0x`-prefixed (or bare) hexadecimal.
    pub fn from_hex(s: &str, prec: u32) -> Result<Residue> {
        Residue::new(parse_hex_u64(s)?, prec)
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.bits)
    }
}

fn check_precision(prec: u32) -> Result<()> {
    if prec == 0 || prec > MAX_PRECISION {
        return Err(Error::InvalidPrecision {
            prec,
            max: MAX_PRECISION,
        });
    }
    Ok(())
}

/// Carry-less product of two words truncated to `prec` bits.
#[inline]
pub fn mul_trunc(a: u64, b: u64, prec: u32) -> u64 {
    let m = mask(prec);
    let (a, b) = (a & m, b & m);
    let r = if prec <= 16 && !clmul::hardware() {
        // product has < 32 significant bits
        clmul_small(a, b)
    } else {
        clmul64_lo(a, b)
    };
    r & m
}

impl Add for Residue {
    type Output = Residue;

    /// Panics on a precision mismatch; see [`Residue::checked_add`].
    fn add(self, rhs: Residue) -> Residue {
        self.checked_add(rhs).expect("residue precision mismatch")
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl Mul for Residue {
    type Output = Residue;

    /// Panics on a precision mismatch; see [`Residue::checked_mul`].
    fn mul(self, rhs: Residue) -> Residue {
        self.checked_mul(rhs).expect("residue precision mismatch")
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x} (mod T^{})", self.bits, self.prec)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.bits)
    }
}
