//! The 2-adic integers as a reference point.
//!
//! Residues of `Z2` modulo `2^k` share the bit encoding of `F2[[T]]/T^k`
//! (digit `i` is bit `i`); only the arithmetic differs, with carries. Tables,
//! compatibility and the cycle walk are literally the same as over
//! `F2[[T]]`, so [`Z2FunctionTable`] wraps a [`FunctionTable`].

mod mahler;
mod vdp;

use std::fmt;

use crate::dynamics::{self, FunctionTable};
use crate::error::{Error, Result};
use crate::gf2ps::{Residue, MAX_PRECISION};
use crate::verdict::LevelVerdicts;

pub use mahler::{check_ergodic_mahler_z2, mahler_eval, MahlerCoefficients};
pub use vdp::{
    check_compatible_z2, check_ergodic_z2, check_mp_z2, to_vdp_z2, vdp_eval_z2, Z2VdpCoefficients,
};

#[inline]
pub(crate) fn mask(m: u32) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// An element of `Z/2^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Z2Residue {
    value: u64,
    prec: u32,
}

impl Z2Residue {
    pub fn new(value: u64, prec: u32) -> Result<Self> {
        check_precision(prec)?;
        if value & !mask(prec) != 0 {
            return Err(Error::OutOfRange { value, prec });
        }
        Ok(Z2Residue { value, prec })
    }

    pub fn reduce(value: u64, prec: u32) -> Result<Self> {
        check_precision(prec)?;
        Ok(Z2Residue {
            value: value & mask(prec),
            prec,
        })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn precision(self) -> u32 {
        self.prec
    }

    fn same(self, rhs: Z2Residue) -> Result<()> {
        if self.prec != rhs.prec {
            return Err(Error::PrecisionMismatch(self.prec, rhs.prec));
        }
        Ok(())
    }

    pub fn checked_add(self, rhs: Z2Residue) -> Result<Z2Residue> {
        self.same(rhs)?;
        Z2Residue::reduce(self.value.wrapping_add(rhs.value), self.prec)
    }

    pub fn checked_sub(self, rhs: Z2Residue) -> Result<Z2Residue> {
        self.same(rhs)?;
        Z2Residue::reduce(self.value.wrapping_sub(rhs.value), self.prec)
    }

    pub fn checked_mul(self, rhs: Z2Residue) -> Result<Z2Residue> {
        self.same(rhs)?;
        Z2Residue::reduce(self.value.wrapping_mul(rhs.value), self.prec)
    }

    /// 2-adic order; `None` for zero.
    pub fn ord(self) -> Option<u32> {
        (self.value != 0).then(|| self.value.trailing_zeros())
    }

    /// The residue of `F2[[T]]` with the same digits.
    pub fn to_f2(self) -> Residue {
        Residue::new(self.value, self.prec).expect("same range")
    }

    pub fn from_f2(r: Residue) -> Z2Residue {
        Z2Residue {
            value: r.bits(),
            prec: r.precision(),
        }
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

impl fmt::Debug for Z2Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^{})", self.value, self.prec)
    }
}

impl fmt::Display for Z2Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}

/// A map `Z/2^k -> Z/2^k` as a table on canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z2FunctionTable(FunctionTable);

impl Z2FunctionTable {
    pub fn new(prec: u32, table: Vec<u64>) -> Result<Self> {
        FunctionTable::new(prec, table).map(Z2FunctionTable)
    }

    /// Tabulates `f`; outputs are reduced mod `2^k`.
    pub fn from_fn(prec: u32, f: impl Fn(u64) -> u64 + Sync) -> Result<Self> {
        FunctionTable::from_fn(prec, f).map(Z2FunctionTable)
    }

    pub fn precision(&self) -> u32 {
        self.0.precision()
    }

    pub fn entries(&self) -> &[u64] {
        self.0.entries()
    }

    pub fn get(&self, x: u64) -> u64 {
        self.0.get(x)
    }

    pub fn apply(&self, x: Z2Residue) -> Result<Z2Residue> {
        self.0.apply(x.to_f2()).map(Z2Residue::from_f2)
    }

    /// The same digit table read over `F2[[T]]`.
    pub fn as_f2(&self) -> &FunctionTable {
        &self.0
    }

    pub fn into_f2(self) -> FunctionTable {
        self.0
    }

    pub fn from_f2(t: FunctionTable) -> Self {
        Z2FunctionTable(t)
    }
}

pub fn is_compatible_z2(t: &Z2FunctionTable) -> LevelVerdicts {
    dynamics::is_compatible(&t.0)
}

pub fn is_bijective_mod_z2(t: &Z2FunctionTable) -> LevelVerdicts {
    dynamics::is_bijective_mod(&t.0)
}

/// Single-cycle check modulo `2^m` for each `m <= k`.
pub fn is_transitive_mod_z2(t: &Z2FunctionTable) -> LevelVerdicts {
    dynamics::is_transitive_mod(&t.0)
}
