use rayon::prelude::*;

use super::exact::constants;
use crate::dynamics::FunctionTable;
use crate::error::{Error, Result};
use crate::gf2ps::{mul_trunc, Poly};

/// Largest precision for which a [`CarlitzContext`] is built.
pub const MAX_CONTEXT_PRECISION: u32 = 16;

/// Values `E_i(x) mod T^k` for every `x` of degree `< k` and every `i < k`.
///
/// `E_i` is constant on the cosets `x + A_{<i}`, so the values are stored
/// per coset, keyed on `x >> i`. Each coset value is computed exactly
/// (defining product, then exact division by `D_i`) and only then reduced.
#[derive(Clone, Debug)]
pub struct CarlitzContext {
    prec: u32,
    // e[i][x >> i] = E_i(x) mod T^k
    e: Vec<Vec<u64>>,
}

impl CarlitzContext {
    pub fn new(prec: u32) -> Result<CarlitzContext> {
        if prec == 0 || prec > MAX_CONTEXT_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_CONTEXT_PRECISION,
            });
        }
        let e = (0..prec)
            .map(|i| {
                let d = constants(i).d;
                (0..1u64 << (prec - i))
                    .into_par_iter()
                    .map(|c| coset_value(i, c << i, &d, prec))
                    .collect()
            })
            .collect();
        Ok(CarlitzContext { prec, e })
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `E_i(x) mod T^k`; zero for `i >= k` since then `deg x < i`.
    #[inline]
    pub fn e_value(&self, i: u32, x: u64) -> u64 {
        if i >= self.prec {
            0
        } else {
            self.e[i as usize][(x >> i) as usize]
        }
    }

    /// `G_n(x) mod T^k` for `deg x < k`.
    pub fn g(&self, n: u64, x: u64) -> u64 {
        let mut acc = 1u64;
        let mut rest = n;
        let mut i = 0;
        while rest != 0 {
            if rest & 1 == 1 {
                acc = mul_trunc(acc, self.e_value(i, x), self.prec);
                if acc == 0 {
                    break;
                }
            }
            rest >>= 1;
            i += 1;
        }
        acc
    }

    /// `G'_n(x) mod T^k` for `deg x < k`.
    pub fn gprime(&self, n: u64, x: u64) -> u64 {
        let mut acc = 1u64;
        let mut rest = n;
        let mut i = 0;
        while rest != 0 {
            if rest & 1 == 1 {
                acc = mul_trunc(acc, self.e_value(i, x) ^ 1, self.prec);
            }
            rest >>= 1;
            i += 1;
        }
        acc
    }

    fn check_table(&self, t: &FunctionTable) -> Result<()> {
        if t.precision() != self.prec {
            return Err(Error::PrecisionMismatch(t.precision(), self.prec));
        }
        Ok(())
    }

    /// Dense coefficients `a_0 .. a_{2^k - 1}` of a table,
    /// `a_n = sum_{deg alpha < k} G'_{2^k - 1 - n}(alpha) f(alpha)`.
    ///
    /// The sum factors digit by digit because the `i`-th factor of
    /// `G'_s(alpha)` depends only on `alpha >> i`; summing out one low bit
    /// of `alpha` per round gives `k` passes over `2^k` entries.
    pub fn extract(&self, t: &FunctionTable) -> Result<Vec<u64>> {
        self.check_table(t)?;
        let k = self.prec;
        let size = 1usize << k;
        // w[y * 2^i + s] with y = alpha >> i and s the low i bits of the index
        let mut w = t.entries().to_vec();
        let mut next = vec![0u64; size];
        for i in 0..k {
            let stride = 1usize << i;
            let ei = &self.e[i as usize];
            for z in 0..size >> (i + 1) {
                for half in 0..2 {
                    let y = 2 * z + half;
                    let u = ei[y] ^ 1;
                    for s in 0..stride {
                        let v = w[y * stride + s];
                        next[z * 2 * stride + s] ^= v;
                        next[z * 2 * stride + stride + s] ^= mul_trunc(v, u, k);
                    }
                }
            }
            std::mem::swap(&mut w, &mut next);
            next.iter_mut().for_each(|v| *v = 0);
        }
        let top = (size - 1) as u64;
        Ok((0..size as u64).map(|n| w[(top - n) as usize]).collect())
    }

    /// Table of `sum_{n < 2^k} a_n G_n(x)`, the inverse of [`extract`](Self::extract).
    pub fn synthesize(&self, a: &[u64]) -> Result<FunctionTable> {
        let k = self.prec;
        let size = 1usize << k;
        if a.len() != size {
            return Err(Error::MalformedTable(format!(
                "expected {size} coefficients, got {}",
                a.len()
            )));
        }
        // v[y * 2^i + s]: partial sums over the digits >= i of n
        let mut v = a.to_vec();
        let mut next = vec![0u64; size];
        for i in (0..k).rev() {
            let stride = 1usize << i;
            let ei = &self.e[i as usize];
            for y in 0..size >> i {
                let z = y >> 1;
                let e = ei[y];
                for s in 0..stride {
                    let lo = v[z * 2 * stride + s];
                    let hi = v[z * 2 * stride + stride + s];
                    next[y * stride + s] = lo ^ mul_trunc(e, hi, k);
                }
            }
            std::mem::swap(&mut v, &mut next);
        }
        FunctionTable::new(k, v)
    }
}

fn coset_value(i: u32, x: u64, d: &Poly, prec: u32) -> u64 {
    if x >> i == 0 {
        return 0;
    }
    let mut acc = Poly::one();
    for alpha in 0..1u64 << i {
        acc = acc.mul_word(x ^ alpha);
    }
    let e = acc
        .exact_div(d)
        .expect("E_i maps polynomials to polynomials");
    e.to_residue(prec).expect("precision validated").bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::exact::{e_normalized, eval_G, eval_Gprime};

    #[test]
    fn matches_exact_evaluation() {
        let k = 6;
        let ctx = CarlitzContext::new(k).unwrap();
        for x in 0..1u64 << k {
            let xp = Poly::from_u64(x);
            for i in 0..k + 2 {
                let exact = e_normalized(i, &xp).unwrap().to_residue(k).unwrap().bits();
                assert_eq!(ctx.e_value(i, x), exact, "E_{i}({x:#x})");
            }
            for n in [0u64, 1, 2, 3, 5, 7, 13, 31, 63, 64, 100] {
                assert_eq!(
                    ctx.g(n, x),
                    eval_G(n, &xp).unwrap().to_residue(k).unwrap().bits()
                );
                assert_eq!(
                    ctx.gprime(n, x),
                    eval_Gprime(n, &xp).unwrap().to_residue(k).unwrap().bits()
                );
            }
        }
    }

    #[test]
    fn extraction_matches_defining_sum() {
        let k = 4;
        let ctx = CarlitzContext::new(k).unwrap();
        let t = FunctionTable::from_fn(k, |x| (x * 7 + 3) & 0xf).unwrap();
        let fast = ctx.extract(&t).unwrap();
        let top = (1u64 << k) - 1;
        for n in 0..=top {
            let direct = (0..=top).fold(0u64, |acc, alpha| {
                acc ^ mul_trunc(ctx.gprime(top - n, alpha), t.get(alpha), k)
            });
            assert_eq!(fast[n as usize], direct, "a_{n}");
        }
    }

    #[test]
    fn synthesis_inverts_extraction() {
        for k in 1..=6 {
            let ctx = CarlitzContext::new(k).unwrap();
            let m = (1u64 << k) - 1;
            let t = FunctionTable::from_fn(k, |x| (x.wrapping_mul(0x9E37) >> 3) & m).unwrap();
            let a = ctx.extract(&t).unwrap();
            assert_eq!(ctx.synthesize(&a).unwrap(), t);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(CarlitzContext::new(0).is_err());
        assert!(CarlitzContext::new(MAX_CONTEXT_PRECISION + 1).is_err());
        let ctx = CarlitzContext::new(3).unwrap();
        assert!(ctx.synthesize(&[0; 4]).is_err());
        assert!(ctx.extract(&FunctionTable::identity(2).unwrap()).is_err());
    }
}
