//! Van der Put expansions over `F2[[T]]`.
//!
//! `f(x) = sum_alpha B_alpha chi(alpha, x)`, where `chi(alpha, .)` is the
//! indicator of the ball `x = alpha mod T^{deg alpha + 1}` (and `x = 0 mod T`
//! for `alpha = 0`). For a 1-Lipschitz `f`, `B_alpha = T^{deg alpha} b_alpha`.
//!
//! Polynomials `alpha` are given by their canonical integers.

use crate::dynamics::{FunctionTable, MAX_TABLE_PRECISION};
use crate::error::{Error, Result};
use crate::gf2ps::{ilog2, Residue};
use crate::verdict::LevelVerdicts;

#[inline]
fn mask(m: u32) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// `value = target mod T^j` on raw bit patterns.
#[inline]
fn congruent(value: u64, target: u64, j: u32) -> bool {
    (value ^ target) & mask(j) == 0
}

/// Degree of `alpha` as a polynomial; 0 for both `alpha = 0` and `alpha = 1`.
#[inline]
fn deg(alpha: u64) -> u32 {
    if alpha <= 1 {
        0
    } else {
        ilog2(alpha)
    }
}

/// Van der Put coefficients `B_alpha` for all `alpha` of degree `< k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VdpCoefficients {
    prec: u32,
    coeffs: Vec<u64>,
}

impl VdpCoefficients {
    /// Dense coefficients `B_0 .. B_{2^k - 1}`.
    pub fn new(prec: u32, coeffs: Vec<u64>) -> Result<Self> {
        // Same size limits as a function table.
        let t = FunctionTable::new(prec, coeffs)?;
        Ok(VdpCoefficients {
            prec,
            coeffs: t.into_entries(),
        })
    }

    /// Sparse coefficients; omitted indices are zero.
    pub fn from_sparse(prec: u32, items: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        if prec == 0 || prec > MAX_TABLE_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_TABLE_PRECISION,
            });
        }
        let mut c = VdpCoefficients::new(prec, vec![0; 1usize << prec])?;
        for (m, v) in items {
            if m >= 1u64 << prec {
                return Err(Error::MalformedTable(format!(
                    "index {m} needs degree >= {prec}"
                )));
            }
            if v > mask(prec) {
                return Err(Error::OutOfRange { value: v, prec });
            }
            c.coeffs[m as usize] = v;
        }
        Ok(c)
    }

    /// Builds `B_alpha = T^{deg alpha} b_alpha mod T^k` from scaled coefficients.
    pub fn from_scaled(prec: u32, b: impl Fn(u64) -> u64) -> Result<Self> {
        if prec == 0 || prec > MAX_TABLE_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_TABLE_PRECISION,
            });
        }
        let n = 1u64 << prec;
        let coeffs = (0..n)
            .map(|alpha| (b(alpha) << deg(alpha)) & mask(prec))
            .collect();
        VdpCoefficients::new(prec, coeffs)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `B_alpha`.
    pub fn big(&self, alpha: u64) -> Residue {
        Residue::new(self.coeffs[alpha as usize], self.prec).expect("validated on construction")
    }

    /// `b_alpha = B_alpha / T^{deg alpha}`, known modulo `T^{k - deg alpha}`.
    /// Errors if `T^{deg alpha}` does not divide `B_alpha`.
    pub fn scaled(&self, alpha: u64) -> Result<Residue> {
        self.big(alpha).shr_exact(deg(alpha))
    }

    /// Sum of the nested-ball terms containing `x`: at most `k` coefficients.
    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = self.coeffs[(x & 1) as usize];
        let mut rest = x >> 1;
        let mut j = 1;
        while rest != 0 {
            if rest & 1 == 1 {
                acc ^= self.coeffs[(x & mask(j + 1)) as usize];
            }
            rest >>= 1;
            j += 1;
        }
        acc
    }

    pub fn to_table(&self) -> FunctionTable {
        FunctionTable::from_fn(self.prec, |x| self.eval(x)).expect("precision already validated")
    }
}

/// Indicator of the Van der Put ball around `alpha`.
pub fn chi(alpha: u64, x: Residue) -> Result<bool> {
    let d = deg(alpha);
    if x.precision() <= d {
        return Err(Error::InsufficientPrecision {
            need: d + 1,
            have: x.precision(),
        });
    }
    Ok(if alpha == 0 {
        x.bits() & 1 == 0
    } else {
        congruent(x.bits(), alpha, d + 1)
    })
}

/// `B_0 = f(0)`, `B_1 = f(1)`, `B_alpha = f(alpha) - f(alpha - T^{deg alpha})`.
pub fn to_vdp(t: &FunctionTable) -> VdpCoefficients {
    let e = t.entries();
    let coeffs = (0..e.len() as u64)
        .map(|alpha| {
            if alpha <= 1 {
                e[alpha as usize]
            } else {
                e[alpha as usize] ^ e[(alpha ^ (1 << ilog2(alpha))) as usize]
            }
        })
        .collect();
    VdpCoefficients {
        prec: t.precision(),
        coeffs,
    }
}

/// `sum_alpha B_alpha chi(alpha, x) mod T^k`.
pub fn from_vdp(c: &VdpCoefficients, x: Residue) -> Result<Residue> {
    if x.precision() != c.prec {
        return Err(Error::PrecisionMismatch(x.precision(), c.prec));
    }
    Residue::new(c.eval(x.bits()), c.prec)
}

/// 1-Lipschitz iff `ord B_alpha >= deg alpha` for every `alpha != 0`.
pub fn check_lipschitz_vdp(c: &VdpCoefficients) -> bool {
    c.coeffs
        .iter()
        .enumerate()
        .skip(2)
        .all(|(alpha, &b)| b & mask(deg(alpha as u64)) == 0)
}

/// Levels at which `b_alpha` is a unit for all `alpha` with `1 <= deg alpha <= m-1`.
fn unit_prefix(c: &VdpCoefficients) -> Vec<bool> {
    // units[m] = all b_alpha units for 2 <= alpha < 2^m
    let mut units = vec![true; c.prec as usize + 1];
    let mut ok = true;
    for m in 2..=c.prec {
        let lo = 1u64 << (m - 1);
        let d = m - 1;
        ok = ok && (lo..lo << 1).all(|alpha| (c.coeffs[alpha as usize] >> d) & 1 == 1);
        units[m as usize] = ok;
    }
    units
}

/// Measure preservation: `b_0 + b_1 = 1 mod T` and `|b_alpha| = 1` for
/// `deg alpha >= 1`. Level `m` reads the conditions visible modulo `T^m`.
pub fn check_mp_vdp(c: &VdpCoefficients) -> Result<LevelVerdicts> {
    if !check_lipschitz_vdp(c) {
        return Err(Error::NotLipschitz);
    }
    let units = unit_prefix(c);
    let base = congruent(c.coeffs[0] ^ c.coeffs[1], 1, 1);
    Ok(LevelVerdicts::from_bools(
        (1..=c.prec).map(|m| base && units[m as usize]),
    ))
}

/// Ergodicity:
/// (1) `b_0 = 1 mod T`, `b_0 + b_1 = 1 + T mod T^2`, `b_T + b_{1+T} = T mod T^2`;
/// (2) every `b_alpha` with `deg alpha >= 1` is a unit;
/// (3) `sum_{deg alpha = n-1} b_alpha = T mod T^2` for `n >= 2`.
///
/// Level `m` (transitivity modulo `T^m`) checks each congruence modulo the
/// part visible at that level, i.e. `B_alpha mod T^m`. All `k` levels are
/// therefore decided by coefficients of precision `k`.
pub fn check_ergodic_vdp(c: &VdpCoefficients) -> Result<LevelVerdicts> {
    if !check_lipschitz_vdp(c) {
        return Err(Error::NotLipschitz);
    }
    let k = c.prec;
    let units = unit_prefix(c);
    // block[n] = sum of b_alpha over deg alpha = n - 1, for n >= 2
    let mut block = vec![0u64; k as usize + 1];
    for n in 2..=k {
        let lo = 1u64 << (n - 1);
        block[n as usize] =
            (lo..lo << 1).fold(0, |s, alpha| s ^ (c.coeffs[alpha as usize] >> (n - 1)));
    }
    let b0 = c.coeffs[0];
    let b1 = c.coeffs[1];
    let verdicts = (1..=k).map(|m| {
        let mut ok = congruent(b0, 1, 1) && congruent(b0 ^ b1, 0b11, m.min(2));
        if m >= 2 {
            let bt = c.coeffs[2] >> 1;
            let bt1 = c.coeffs[3] >> 1;
            ok &= congruent(bt ^ bt1, 0b10, (m - 1).min(2));
        }
        ok &= units[m as usize];
        for n in 2..=m {
            ok &= congruent(block[n as usize], 0b10, (m - n + 1).min(2));
        }
        ok
    });
    Ok(LevelVerdicts::from_bools(verdicts))
}
