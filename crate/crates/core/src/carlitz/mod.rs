//! The Carlitz basis of `F2[[T]]` (the case `r = 2`).
//!
//! A continuous `f` expands as `f(x) = sum_n a_n G_n(x)`. Evaluation of the
//! basis is exact over `F2[T]`; residues are formed only after the exact
//! division by `D_i`.

mod context;
mod exact;

use std::collections::BTreeMap;

use crate::dynamics::FunctionTable;
use crate::error::{Error, Result};
use crate::gf2ps::{ilog2, mul_trunc, Poly, Residue};
use crate::verdict::{LevelVerdicts, Verdict};

pub use context::{CarlitzContext, MAX_CONTEXT_PRECISION};
pub use exact::{
    binom_mod2, bracket, carlitz_factorial, constants, e_normalized, e_poly, eval_G, eval_Gprime,
    eval_H, CarlitzConstants, DigitData, MAX_DIGIT_INDEX,
};

#[inline]
fn mask(m: u32) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Carlitz coefficients `a_n` modulo `T^k`.
///
/// Indices not stored are zero. `bound`, when present, is the largest index
/// the coefficients are known for; levels that need `a_n` beyond it are
/// reported as unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzCoefficients {
    prec: u32,
    bound: Option<u64>,
    coeffs: BTreeMap<u64, Residue>,
}

impl CarlitzCoefficients {
    pub fn new(prec: u32, bound: Option<u64>) -> Result<Self> {
        Residue::zero(prec)?;
        Ok(CarlitzCoefficients {
            prec,
            bound,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_pairs(
        prec: u32,
        bound: Option<u64>,
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        let mut c = CarlitzCoefficients::new(prec, bound)?;
        for (n, a) in pairs {
            c.insert(n, Residue::new(a, prec)?)?;
        }
        Ok(c)
    }

    /// Dense coefficients `a_0 .. a_{len-1}` with zeros dropped.
    pub fn from_dense(prec: u32, bound: Option<u64>, dense: &[u64]) -> Result<Self> {
        CarlitzCoefficients::from_pairs(
            prec,
            bound,
            dense
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(n, &a)| (n as u64, a)),
        )
    }

    pub fn insert(&mut self, n: u64, a: Residue) -> Result<()> {
        if a.precision() != self.prec {
            return Err(Error::PrecisionMismatch(a.precision(), self.prec));
        }
        self.coeffs.insert(n, a);
        Ok(())
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn bound(&self) -> Option<u64> {
        self.bound
    }

    /// `a_n`, zero when not stored.
    pub fn get(&self, n: u64) -> Residue {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or_else(|| Residue::zero(self.prec).expect("validated precision"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Residue)> + '_ {
        self.coeffs.iter().map(|(&n, &a)| (n, a))
    }

    /// `a_0 .. a_{2^k - 1}`; higher indices do not affect values at
    /// points of degree `< k`.
    pub fn dense(&self) -> Vec<u64> {
        let size = 1u64 << self.prec.min(MAX_CONTEXT_PRECISION);
        let mut out = vec![0u64; size as usize];
        for (&n, a) in self.coeffs.range(..size) {
            out[n as usize] = a.bits();
        }
        out
    }

    pub fn to_table(&self) -> Result<FunctionTable> {
        self.to_table_with(&CarlitzContext::new(self.prec)?)
    }

    pub fn to_table_with(&self, ctx: &CarlitzContext) -> Result<FunctionTable> {
        if ctx.precision() != self.prec {
            return Err(Error::PrecisionMismatch(ctx.precision(), self.prec));
        }
        ctx.synthesize(&self.dense())
    }

    /// Same coefficients read at a lower precision.
    pub fn truncate(&self, prec: u32) -> Result<Self> {
        let mut c = CarlitzCoefficients::new(prec, self.bound)?;
        for (&n, a) in &self.coeffs {
            c.insert(n, a.truncate(prec)?)?;
        }
        Ok(c)
    }
}

/// `f(x) = 1 + (1+T) x + sum_{n >= 2} T^n G_{2^n - 1}(x)` modulo `T^k`,
/// the basic ergodic example.
pub fn ergodic_example(prec: u32) -> Result<CarlitzCoefficients> {
    let mut pairs = vec![(0u64, 1u64), (1, 0b11 & mask(prec))];
    for n in 2..prec.min(63) {
        pairs.push(((1u64 << n) - 1, 1u64 << n));
    }
    // a_{2^n - 1} = T^n vanishes mod T^k for n >= k
    CarlitzCoefficients::from_pairs(prec, None, pairs.into_iter().filter(|&(_, a)| a != 0))
}

/// Coefficients `a_n` for `n < 2^k` of a table of precision `k`.
pub fn to_carlitz(t: &FunctionTable) -> Result<CarlitzCoefficients> {
    to_carlitz_with(&CarlitzContext::new(t.precision())?, t)
}

pub fn to_carlitz_with(ctx: &CarlitzContext, t: &FunctionTable) -> Result<CarlitzCoefficients> {
    let a = ctx.extract(t)?;
    let k = t.precision();
    CarlitzCoefficients::from_dense(k, Some((1u64 << k) - 1), &a)
}

/// `sum_n a_n G_n(x) mod T^k`, with `x` read as its canonical polynomial.
pub fn from_carlitz(c: &CarlitzCoefficients, x: Residue) -> Result<Residue> {
    let k = c.prec;
    if x.precision() != k {
        return Err(Error::PrecisionMismatch(x.precision(), k));
    }
    let xp = Poly::from_u64(x.bits());
    // E_i(x) mod T^k for this point; E_i(x) = 0 once i > deg x
    let e: Vec<u64> = (0..k)
        .map(|i| e_normalized(i, &xp)?.to_residue(k).map(Residue::bits))
        .collect::<Result<_>>()?;
    let mut acc = 0u64;
    for (&n, a) in &c.coeffs {
        if n >> k != 0 {
            continue;
        }
        let mut g = 1u64;
        let mut rest = n;
        let mut i = 0;
        while rest != 0 && g != 0 {
            if rest & 1 == 1 {
                g = mul_trunc(g, e[i], k);
            }
            rest >>= 1;
            i += 1;
        }
        acc ^= mul_trunc(a.bits(), g, k);
    }
    Residue::new(acc, k)
}

/// Result of the Lipschitz test `ord a_n >= floor(log2 n)` for `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzReport {
    pub holds: bool,
    /// Stored indices with `floor(log2 n) >= k` whose residue is zero: the
    /// bound cannot be confirmed modulo `T^k`.
    pub undetermined: Vec<u64>,
}

pub fn lipschitz_report(c: &CarlitzCoefficients) -> LipschitzReport {
    let mut holds = true;
    let mut undetermined = Vec::new();
    for (&n, a) in c.coeffs.range(1..) {
        let need = ilog2(n);
        if need >= c.prec {
            if a.is_zero() {
                undetermined.push(n);
            } else {
                holds = false;
            }
        } else if a.bits() & mask(need) != 0 {
            holds = false;
        }
    }
    LipschitzReport {
        holds,
        undetermined,
    }
}

pub fn check_lipschitz_carlitz(c: &CarlitzCoefficients) -> bool {
    lipschitz_report(c).holds
}

/// Ergodicity in the Carlitz basis:
/// (1) `a_0 = 1 mod T`, `a_1 = 1 + T mod T^2`, `a_3 = T^2 mod T^3`;
/// (2) `ord a_n > floor(log2 n)` for `n >= 2`;
/// (3) `a_{2^n - 1} = T^n mod T^{n+1}` for `n >= 2`.
///
/// Level `m` reads the coefficients `a_n`, `n < 2^m`, modulo `T^m`; it is
/// unknown when the coefficient bound is below `2^m - 1`.
pub fn check_ergodic_carlitz(c: &CarlitzCoefficients) -> Result<LevelVerdicts> {
    if !check_lipschitz_carlitz(c) {
        return Err(Error::NotLipschitz);
    }
    let k = c.prec;
    let congruent = |n: u64, target: u64, j: u32| (c.get(n).bits() ^ target) & mask(j) == 0;
    let levels = (1..=k.min(63))
        .map(|m| {
            let top = (1u64 << m) - 1;
            if c.bound.is_some_and(|b| b < top) {
                return Verdict::Unknown;
            }
            let mut ok = congruent(0, 1, 1) && congruent(1, 0b11, m.min(2));
            if m >= 2 {
                ok &= congruent(3, 0b100, m.min(3));
            }
            if top >= 2 {
                for (&n, a) in c.coeffs.range(2..=top) {
                    ok &= a.bits() & mask(ilog2(n) + 1) == 0;
                }
            }
            for n in 2..m {
                ok &= congruent((1 << n) - 1, 1 << n, n + 1);
            }
            Verdict::from_bool(ok)
        })
        .collect();
    Ok(LevelVerdicts::new(levels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: u64, k: u32) -> Residue {
        Residue::new(x, k).unwrap()
    }

    const EXAMPLE_K4: [u64; 16] = [
        0x1, 0x2, 0xf, 0x8, 0xd, 0x6, 0x3, 0x4, 0x9, 0xa, 0x7, 0x0, 0x5, 0xe, 0xb, 0xc,
    ];

    #[test]
    fn to_carlitz_examples() {
        let c = to_carlitz(&FunctionTable::identity(3).unwrap()).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(1, r(1, 3))]);
        let c = to_carlitz(&FunctionTable::identity(1).unwrap()).unwrap();
        assert_eq!(c.get(0), r(0, 1));
        assert_eq!(c.get(1), r(1, 1));
        let c = to_carlitz(&FunctionTable::from_fn(4, |_| 1).unwrap()).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(0, r(1, 4))]);
        let c = to_carlitz(&FunctionTable::new(4, EXAMPLE_K4.to_vec()).unwrap()).unwrap();
        assert_eq!(
            c.iter().map(|(n, a)| (n, a.bits())).collect::<Vec<_>>(),
            vec![(0, 0x1), (1, 0x3), (3, 0x4), (7, 0x8)]
        );
    }

    #[test]
    fn from_carlitz_examples() {
        let id = CarlitzCoefficients::from_pairs(3, None, [(1, 1)]).unwrap();
        assert_eq!(from_carlitz(&id, r(0x5, 3)).unwrap(), r(0x5, 3));
        let ex = ergodic_example(4).unwrap();
        assert_eq!(from_carlitz(&ex, r(0x2, 4)).unwrap(), r(0xF, 4));
        let one = CarlitzCoefficients::from_pairs(4, None, [(0, 1)]).unwrap();
        for x in 0..16 {
            assert_eq!(from_carlitz(&one, r(x, 4)).unwrap(), r(1, 4));
        }
        assert!(from_carlitz(&one, r(1, 3)).is_err());
    }

    #[test]
    fn example_table_and_pointwise_evaluation_agree() {
        let ex = ergodic_example(4).unwrap();
        assert_eq!(ex.to_table().unwrap().entries(), &EXAMPLE_K4);
        let ex = ergodic_example(7).unwrap();
        let t = ex.to_table().unwrap();
        for x in 0..128 {
            assert_eq!(from_carlitz(&ex, r(x, 7)).unwrap().bits(), t.get(x));
        }
    }

    #[test]
    fn lipschitz_examples() {
        let c = CarlitzCoefficients::from_pairs(4, None, [(0, 1), (1, 1)]).unwrap();
        assert!(check_lipschitz_carlitz(&c));
        let c = CarlitzCoefficients::from_pairs(4, None, [(2, 1)]).unwrap();
        assert!(!check_lipschitz_carlitz(&c));
        assert!(check_lipschitz_carlitz(&ergodic_example(12).unwrap()));
        let c = CarlitzCoefficients::from_pairs(3, None, [(8, 0), (9, 0)]).unwrap();
        assert_eq!(
            lipschitz_report(&c),
            LipschitzReport {
                holds: true,
                undetermined: vec![8, 9]
            }
        );
        let c = CarlitzCoefficients::from_pairs(3, None, [(8, 4)]).unwrap();
        assert!(!check_lipschitz_carlitz(&c));
    }

    #[test]
    fn ergodic_examples() {
        for k in 1..=12 {
            assert!(
                check_ergodic_carlitz(&ergodic_example(k).unwrap())
                    .unwrap()
                    .holds(),
                "k = {k}"
            );
        }
        let c = CarlitzCoefficients::from_pairs(4, None, [(0, 1), (1, 1)]).unwrap();
        let v = check_ergodic_carlitz(&c).unwrap();
        assert_eq!(v.level(1), Verdict::Holds);
        assert_eq!(v.level(2), Verdict::Fails);
        let c = CarlitzCoefficients::from_pairs(4, None, [(1, 1)]).unwrap();
        assert_eq!(check_ergodic_carlitz(&c).unwrap().level(1), Verdict::Fails);
        let c = CarlitzCoefficients::from_pairs(4, None, [(2, 1)]).unwrap();
        assert!(matches!(
            check_ergodic_carlitz(&c),
            Err(Error::NotLipschitz)
        ));
    }

    #[test]
    fn bound_limits_levels() {
        let mut ex = ergodic_example(6).unwrap();
        ex.bound = Some(7);
        let v = check_ergodic_carlitz(&ex).unwrap();
        assert_eq!(v.determined(), 3);
        assert_eq!(v.level(3), Verdict::Holds);
        assert_eq!(v.level(4), Verdict::Unknown);
        assert_eq!(v.overall(), Verdict::Unknown);
    }

    #[test]
    fn truncation_keeps_indices() {
        let ex = ergodic_example(8).unwrap().truncate(4).unwrap();
        assert_eq!(ex.get(7), r(0x8, 4));
        assert_eq!(ex.get(15), r(0, 4));
    }
}
