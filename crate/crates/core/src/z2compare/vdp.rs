use super::{mask, Z2FunctionTable, Z2Residue};
use crate::dynamics::MAX_TABLE_PRECISION;
use crate::error::{Error, Result};
use crate::gf2ps::ilog2;
use crate::verdict::LevelVerdicts;

#[inline]
fn top(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        ilog2(m)
    }
}

/// Van der Put coefficients over `Z2`: `f(x) = sum_m B_m chi(m, x)` with
/// `B_m = 2^{floor(log2 m)} b_m` for compatible `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z2VdpCoefficients {
    prec: u32,
    coeffs: Vec<u64>,
}

impl Z2VdpCoefficients {
    pub fn new(prec: u32, coeffs: Vec<u64>) -> Result<Self> {
        let t = Z2FunctionTable::new(prec, coeffs)?;
        Ok(Z2VdpCoefficients {
            prec,
            coeffs: t.0.into_entries(),
        })
    }

    /// `B_m = 2^{floor(log2 m)} b_m mod 2^k`.
    pub fn from_scaled(prec: u32, b: impl Fn(u64) -> u64) -> Result<Self> {
        if prec == 0 || prec > MAX_TABLE_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_TABLE_PRECISION,
            });
        }
        let coeffs = (0..1u64 << prec)
            .map(|m| b(m).wrapping_shl(top(m)) & mask(prec))
            .collect();
        Z2VdpCoefficients::new(prec, coeffs)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn big(&self, m: u64) -> Z2Residue {
        Z2Residue::new(self.coeffs[m as usize], self.prec).expect("validated on construction")
    }

    /// `b_m`, known modulo `2^{k - floor(log2 m)}`.
    pub fn scaled(&self, m: u64) -> Result<Z2Residue> {
        let w = top(m);
        let v = self.coeffs[m as usize];
        if v & mask(w) != 0 {
            return Err(Error::InexactDivision);
        }
        Z2Residue::new(v >> w, self.prec - w)
    }

    fn eval(&self, x: u64) -> u64 {
        let mut acc = self.coeffs[(x & 1) as usize];
        let mut rest = x >> 1;
        let mut j = 1;
        while rest != 0 {
            if rest & 1 == 1 {
                acc = acc.wrapping_add(self.coeffs[(x & mask(j + 1)) as usize]);
            }
            rest >>= 1;
            j += 1;
        }
        acc & mask(self.prec)
    }

    pub fn to_table(&self) -> Z2FunctionTable {
        Z2FunctionTable::from_fn(self.prec, |x| self.eval(x)).expect("precision already validated")
    }
}

/// `B_0 = f(0)`, `B_1 = f(1)`, `B_m = f(m) - f(m - 2^{floor(log2 m)})`.
pub fn to_vdp_z2(t: &Z2FunctionTable) -> Z2VdpCoefficients {
    let e = t.entries();
    let k = t.precision();
    let coeffs = (0..e.len() as u64)
        .map(|m| {
            if m <= 1 {
                e[m as usize]
            } else {
                e[m as usize].wrapping_sub(e[(m - (1 << ilog2(m))) as usize]) & mask(k)
            }
        })
        .collect();
    Z2VdpCoefficients { prec: k, coeffs }
}

pub fn vdp_eval_z2(c: &Z2VdpCoefficients, x: Z2Residue) -> Result<Z2Residue> {
    if x.precision() != c.prec {
        return Err(Error::PrecisionMismatch(x.precision(), c.prec));
    }
    Z2Residue::new(c.eval(x.value()), c.prec)
}

/// `2^{floor(log2 m)} | B_m` for all `m >= 2`.
pub fn check_compatible_z2(c: &Z2VdpCoefficients) -> bool {
    c.coeffs
        .iter()
        .enumerate()
        .skip(2)
        .all(|(m, &b)| b & mask(top(m as u64)) == 0)
}

// odd[m] = b_j odd for all 2 <= j < 2^m
fn odd_prefix(c: &Z2VdpCoefficients) -> Vec<bool> {
    let mut odd = vec![true; c.prec as usize + 1];
    let mut ok = true;
    for m in 2..=c.prec {
        let lo = 1u64 << (m - 1);
        ok = ok && (lo..lo << 1).all(|j| (c.coeffs[j as usize] >> (m - 1)) & 1 == 1);
        odd[m as usize] = ok;
    }
    odd
}

#[inline]
fn congruent(value: u64, target: u64, j: u32) -> bool {
    value.wrapping_sub(target) & mask(j) == 0
}

/// Measure preservation: `b_0 + b_1` odd and every `b_m`, `m >= 2`, odd.
pub fn check_mp_z2(c: &Z2VdpCoefficients) -> Result<LevelVerdicts> {
    if !check_compatible_z2(c) {
        return Err(Error::NotLipschitz);
    }
    let odd = odd_prefix(c);
    let base = congruent(c.coeffs[0].wrapping_add(c.coeffs[1]), 1, 1);
    Ok(LevelVerdicts::from_bools(
        (1..=c.prec).map(|m| base && odd[m as usize]),
    ))
}

/// Ergodicity: `b_0 = 1 mod 2`, `b_0 + b_1 = 3 mod 4`, `b_2 + b_3 = 2 mod 4`,
/// every `b_m` odd for `m >= 2`, and `sum_{m = 2^{n-1}}^{2^n - 1} b_m = 0 mod 4`
/// for `n >= 3`. Level `m` reads each congruence modulo the part visible
/// modulo `2^m`.
pub fn check_ergodic_z2(c: &Z2VdpCoefficients) -> Result<LevelVerdicts> {
    if !check_compatible_z2(c) {
        return Err(Error::NotLipschitz);
    }
    let k = c.prec;
    let odd = odd_prefix(c);
    let mut block = vec![0u64; k as usize + 1];
    for n in 2..=k {
        let lo = 1u64 << (n - 1);
        block[n as usize] =
            (lo..lo << 1).fold(0u64, |s, m| s.wrapping_add(c.coeffs[m as usize] >> (n - 1)));
    }
    let b0 = c.coeffs[0];
    let b1 = c.coeffs[1];
    let verdicts = (1..=k).map(|m| {
        let mut ok = congruent(b0, 1, 1) && congruent(b0.wrapping_add(b1), 3, m.min(2));
        if m >= 2 {
            let s = (c.coeffs[2] >> 1).wrapping_add(c.coeffs[3] >> 1);
            ok &= congruent(s, 2, (m - 1).min(2));
        }
        ok &= odd[m as usize];
        for n in 3..=m {
            ok &= congruent(block[n as usize], 0, (m - n + 1).min(2));
        }
        ok
    });
    Ok(LevelVerdicts::from_bools(verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Verdict;

    fn table(k: u32, f: impl Fn(u64) -> u64 + Sync) -> Z2FunctionTable {
        Z2FunctionTable::from_fn(k, f).unwrap()
    }

    #[test]
    fn to_vdp_examples() {
        let c = to_vdp_z2(&table(4, |x| x + 1));
        assert_eq!(&c.coeffs()[..2], &[1, 2]);
        for m in 2..16u64 {
            assert_eq!(c.coeffs()[m as usize], 1 << ilog2(m));
            assert_eq!(c.scaled(m).unwrap().value(), 1);
        }
        let c = to_vdp_z2(&table(4, |x| x));
        assert_eq!(&c.coeffs()[..2], &[0, 1]);
        assert!((2..16).all(|m| c.scaled(m).unwrap().value() == 1));
        let c = to_vdp_z2(&table(4, |_| 9));
        assert_eq!(&c.coeffs()[..2], &[9, 9]);
        assert!(c.coeffs()[2..].iter().all(|&b| b == 0));
    }

    #[test]
    fn evaluation_roundtrip() {
        let t = table(6, |x| x * x * 3 + 5 * x + 7);
        let c = to_vdp_z2(&t);
        assert_eq!(c.to_table(), t);
        for x in 0..64 {
            let xr = Z2Residue::new(x, 6).unwrap();
            assert_eq!(vdp_eval_z2(&c, xr).unwrap().value(), t.get(x));
        }
    }

    #[test]
    fn mp_examples() {
        assert!(check_mp_z2(&to_vdp_z2(&table(4, |x| x))).unwrap().holds());
        assert!(check_mp_z2(&to_vdp_z2(&table(4, |x| x + 1)))
            .unwrap()
            .holds());
        assert_eq!(
            check_mp_z2(&to_vdp_z2(&table(4, |_| 0))).unwrap().level(1),
            Verdict::Fails
        );
        let bad = Z2VdpCoefficients::new(3, vec![0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(check_mp_z2(&bad), Err(Error::NotLipschitz)));
    }

    #[test]
    fn ergodic_examples() {
        assert!(check_ergodic_z2(&to_vdp_z2(&table(8, |x| x + 1)))
            .unwrap()
            .holds());
        let id = check_ergodic_z2(&to_vdp_z2(&table(4, |x| x))).unwrap();
        assert_eq!(id.level(1), Verdict::Fails);
        let plus_two = check_ergodic_z2(&to_vdp_z2(&table(4, |x| x + 2))).unwrap();
        assert_eq!(plus_two.level(1), Verdict::Fails);
        // 5x + 1 is ergodic; 3x + 1 is not (3 != 1 mod 4)
        assert!(check_ergodic_z2(&to_vdp_z2(&table(8, |x| 5 * x + 1)))
            .unwrap()
            .holds());
        assert!(!check_ergodic_z2(&to_vdp_z2(&table(8, |x| 3 * x + 1)))
            .unwrap()
            .holds());
    }

    #[test]
    fn from_scaled_is_compatible() {
        let c = Z2VdpCoefficients::from_scaled(5, |m| m * 3 + 1).unwrap();
        assert!(check_compatible_z2(&c));
        assert_eq!(to_vdp_z2(&c.to_table()), c);
    }
}
