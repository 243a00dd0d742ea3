use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{mask, Z2FunctionTable, Z2Residue};
use crate::error::{Error, Result};
use crate::gf2ps::ilog2;

/// Mahler coefficients `a_0 .. a_N` modulo `2^k`:
/// `f(x) = sum_i a_i binom(x, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MahlerCoefficients {
    prec: u32,
    coeffs: Vec<u64>,
}

impl MahlerCoefficients {
    pub fn new(prec: u32, coeffs: Vec<u64>) -> Result<Self> {
        Z2Residue::new(0, prec)?;
        if let Some(&bad) = coeffs.iter().find(|&&a| a & !mask(prec) != 0) {
            return Err(Error::OutOfRange { value: bad, prec });
        }
        Ok(MahlerCoefficients { prec, coeffs })
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Largest stored index `N`; `None` when empty.
    pub fn bound(&self) -> Option<u64> {
        self.coeffs.len().checked_sub(1).map(|n| n as u64)
    }

    pub fn to_table(&self) -> Z2FunctionTable {
        Z2FunctionTable::from_fn(self.prec, |x| eval(self, x)).expect("precision validated")
    }
}

fn eval(c: &MahlerCoefficients, x: u64) -> u64 {
    let modulus = BigUint::from(1u8) << c.prec;
    let mut binom = BigUint::from(1u8);
    let mut acc = BigUint::zero();
    for (i, &a) in c.coeffs.iter().enumerate() {
        let i = i as u64;
        if i > x {
            break;
        }
        if i > 0 {
            // binom(x, i) = binom(x, i-1) (x - i + 1) / i, exact
            binom = binom * (x - i + 1) / i;
        }
        acc += &binom * a;
    }
    (acc % modulus).to_u64().expect("reduced below 2^64")
}

/// `sum_i a_i binom(x, i) mod 2^k`, with exact integer binomials at the
/// canonical representative of `x`.
pub fn mahler_eval(c: &MahlerCoefficients, x: Z2Residue) -> Result<Z2Residue> {
    if x.precision() != c.prec {
        return Err(Error::PrecisionMismatch(x.precision(), c.prec));
    }
    Z2Residue::new(eval(c, x.value()), c.prec)
}

/// `a_0` odd, `a_1 = 1 mod 4`, `a_i = 0 mod 2^{floor(log2(i+1)) + 1}` for
/// `i >= 2`; each modulus is capped at `2^k`.
pub fn check_ergodic_mahler_z2(c: &MahlerCoefficients) -> bool {
    let k = c.prec;
    let a = |i: usize| c.coeffs.get(i).copied().unwrap_or(0);
    let cong = |v: u64, target: u64, j: u32| v.wrapping_sub(target) & mask(j.min(k)) == 0;
    cong(a(0), 1, 1)
        && cong(a(1), 1, 2)
        && c.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .all(|(i, &v)| cong(v, 0, ilog2(i as u64 + 1) + 1))
}
