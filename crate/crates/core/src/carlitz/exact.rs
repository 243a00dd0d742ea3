//! Exact Carlitz polynomials over `F2[T]`.

use crate::error::{Error, Result};
use crate::gf2ps::{Degree, Poly};

/// Largest digit index `i` for which `E_i` is evaluated at points of degree
/// `>= i`; the defining product has `2^i` factors.
pub const MAX_DIGIT_INDEX: u32 = 24;

/// `[i]`, `L_i` and `D_i` for one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzConstants {
    pub i: u32,
    /// `[i] = T^{2^i} + T`; absent for `i = 0`.
    pub bracket: Option<Poly>,
    /// `L_i = [i][i-1]...[1]`.
    pub l: Poly,
    /// `D_i = [i][i-1]^2 ... [1]^{2^{i-1}}`.
    pub d: Poly,
}

/// `T^{2^i} + T` for `i >= 1`.
pub fn bracket(i: u32) -> Poly {
    assert!(i >= 1, "[0] is not used");
    &Poly::monomial(1u64 << i) + &Poly::from_u64(0b10)
}

pub fn constants(i: u32) -> CarlitzConstants {
    let mut l = Poly::one();
    let mut d = Poly::one();
    for j in 1..=i {
        let b = bracket(j);
        l = &l * &b;
        d = &d * &b.pow(1u64 << (i - j));
    }
    CarlitzConstants {
        i,
        bracket: (i >= 1).then(|| bracket(i)),
        l,
        d,
    }
}

/// Carlitz factorial `Pi(n) = prod_j D_j^{n_j}`.
pub fn carlitz_factorial(n: u64) -> Poly {
    let mut acc = Poly::one();
    let mut rest = n;
    let mut j = 0;
    while rest != 0 {
        if rest & 1 == 1 {
            acc = &acc * &constants(j).d;
        }
        rest >>= 1;
        j += 1;
    }
    acc
}

/// Binary digits of `n` together with `nu(n)` and the top digit value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitData {
    pub n: u64,
    /// Little-endian; empty for `n = 0`.
    pub digits: Vec<bool>,
    /// Largest `e` with `2^e | n`; `None` for `n = 0`.
    pub nu: Option<u32>,
    /// `n_w 2^w` for the top digit `w`; 0 for `n = 0`.
    pub top: u64,
}

impl DigitData {
    pub fn new(n: u64) -> DigitData {
        let len = 64 - n.leading_zeros();
        DigitData {
            n,
            digits: (0..len).map(|i| (n >> i) & 1 == 1).collect(),
            nu: (n != 0).then(|| n.trailing_zeros()),
            top: if n == 0 { 0 } else { 1u64 << (len - 1) },
        }
    }
}

/// `binom(m, j) mod 2`, by Lucas: 1 iff `j` is a submask of `m`.
pub fn binom_mod2(m: u64, j: u64) -> bool {
    j & !m == 0
}

fn degree_below(x: &Poly, i: u32) -> bool {
    match x.degree() {
        Degree::NegInfinity => true,
        Degree::Finite(d) => d < i as u64,
    }
}

/// `e_i(x) = prod_{deg alpha < i} (x - alpha)`, with `e_0(x) = x`.
pub fn e_poly(i: u32, x: &Poly) -> Result<Poly> {
    if degree_below(x, i) {
        return Ok(Poly::zero());
    }
    if i > MAX_DIGIT_INDEX {
        return Err(Error::Precondition(format!("e_{i} has too many factors")));
    }
    let mut acc = Poly::one();
    for alpha in 0..1u64 << i {
        let factor = x + &Poly::from_u64(alpha);
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// `E_i(x) = e_i(x) / D_i`, exactly.
pub fn e_normalized(i: u32, x: &Poly) -> Result<Poly> {
    let e = e_poly(i, x)?;
    if e.is_zero() {
        return Ok(e);
    }
    e.exact_div(&constants(i).d)
}

/// `G_n(x) = prod_{i: n_i = 1} E_i(x)`.
#[allow(non_snake_case)]
pub fn eval_G(n: u64, x: &Poly) -> Result<Poly> {
    let mut acc = Poly::one();
    for (i, set) in DigitData::new(n).digits.into_iter().enumerate() {
        if set {
            let e = e_normalized(i as u32, x)?;
            if e.is_zero() {
                return Ok(e);
            }
            acc = &acc * &e;
        }
    }
    Ok(acc)
}

/// `G'_n(x) = prod_{i: n_i = 1} (E_i(x) + 1)`.
#[allow(non_snake_case)]
pub fn eval_Gprime(n: u64, x: &Poly) -> Result<Poly> {
    let mut acc = Poly::one();
    for (i, set) in DigitData::new(n).digits.into_iter().enumerate() {
        if set {
            let e = &e_normalized(i as u32, x)? + &Poly::one();
            acc = &acc * &e;
        }
    }
    Ok(acc)
}

/// `H_n(x) = Pi(n+1) G_{n+1}(x) / (Pi(n) x) = L_{nu(n+1)} G_{n+1}(x) / x`.
#[allow(non_snake_case)]
pub fn eval_H(n: u64, x: &Poly) -> Result<Poly> {
    if n == 0 {
        return Ok(Poly::one());
    }
    if x.is_zero() {
        return Err(Error::HUndefinedAtZero);
    }
    let n1 = n + 1;
    let l = constants(n1.trailing_zeros()).l;
    (&l * &eval_G(n1, x)?).exact_div(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u64) -> Poly {
        Poly::from_u64(bits)
    }

    #[test]
    fn constants_examples() {
        let c1 = constants(1);
        assert_eq!(c1.bracket, Some(p(0x6)));
        assert_eq!((c1.l, c1.d), (p(0x6), p(0x6)));
        let c2 = constants(2);
        assert_eq!(c2.bracket, Some(p(0x12)));
        assert_eq!(c2.l, p(0x6C));
        assert_eq!(c2.d, p(0x168));
        let c0 = constants(0);
        assert_eq!((c0.bracket, c0.l, c0.d), (None, p(1), p(1)));
    }

    #[test]
    fn constant_orders_and_degrees() {
        for i in 0..8u32 {
            let c = constants(i);
            assert_eq!(c.l.ord(), crate::gf2ps::Valuation::Finite(i));
            assert_eq!(c.d.ord(), crate::gf2ps::Valuation::Finite((1 << i) - 1));
            assert_eq!(c.d.degree(), Degree::Finite(i as u64 * (1 << i)));
        }
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(carlitz_factorial(0), p(1));
        assert_eq!(carlitz_factorial(3), p(0x6));
        // Pi(n-1) L_{nu(n)} = Pi(n)
        for n in 1..64u64 {
            let l = constants(n.trailing_zeros()).l;
            assert_eq!(
                &carlitz_factorial(n - 1) * &l,
                carlitz_factorial(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn digit_data() {
        let d = DigitData::new(12);
        assert_eq!(d.digits, vec![false, false, true, true]);
        assert_eq!(d.nu, Some(2));
        assert_eq!(d.top, 8);
        let z = DigitData::new(0);
        assert!(z.digits.is_empty());
        assert_eq!((z.nu, z.top), (None, 0));
    }

    #[test]
    fn lucas_examples() {
        assert!(binom_mod2(3, 1));
        assert!(!binom_mod2(4, 2));
        assert!(binom_mod2(9, 0));
        // against Pascal's triangle
        let mut row = vec![1u64];
        for m in 0..40u64 {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(binom_mod2(m, j as u64), c % 2 == 1);
            }
            let mut next = vec![1u64; row.len() + 1];
            for j in 1..row.len() {
                next[j] = (row[j - 1] + row[j]) % 2;
            }
            row = next;
        }
    }

    #[test]
    fn g_examples() {
        let t = p(0x2);
        assert_eq!(eval_G(2, &t).unwrap(), p(1));
        assert_eq!(eval_G(2, &p(0x3)).unwrap(), p(1));
        assert_eq!(eval_G(3, &t).unwrap(), t);
        assert_eq!(eval_G(2, &p(0x4)).unwrap(), p(0x6));
        assert_eq!(eval_G(1, &p(0xB)).unwrap(), p(0xB));
        for n in 2..40 {
            assert!(eval_G(n, &p(1)).unwrap().is_zero());
        }
        for n in 1..40 {
            assert!(eval_G(n, &Poly::zero()).unwrap().is_zero());
        }
        assert_eq!(eval_G(0, &Poly::zero()).unwrap(), p(1));
    }

    #[test]
    fn gprime_examples() {
        for a in 0..16 {
            assert_eq!(eval_Gprime(0, &p(a)).unwrap(), p(1));
        }
        assert_eq!(eval_Gprime(1, &Poly::zero()).unwrap(), p(1));
        assert!(eval_Gprime(1, &p(1)).unwrap().is_zero());
        assert!(eval_Gprime(3, &p(0x2)).unwrap().is_zero());
    }

    #[test]
    fn h_examples() {
        assert_eq!(eval_H(0, &Poly::zero()).unwrap(), p(1));
        assert_eq!(eval_H(0, &p(0x7)).unwrap(), p(1));
        assert_eq!(eval_H(1, &p(0x2)).unwrap(), p(0x3));
        assert!(eval_H(1, &p(1)).unwrap().is_zero());
        assert!(matches!(
            eval_H(3, &Poly::zero()),
            Err(Error::HUndefinedAtZero)
        ));
        // H_1(x) = x + 1 everywhere
        for a in 1..64 {
            assert_eq!(eval_H(1, &p(a)).unwrap(), p(a ^ 1));
        }
    }

    #[test]
    fn e_values_are_integral_for_larger_points() {
        for i in 0..6 {
            for x in [0x40u64, 0x5a, 0x7f, 0x1234] {
                e_normalized(i, &p(x)).unwrap();
            }
        }
    }

    #[test]
    fn oversized_product_is_rejected() {
        let x = Poly::monomial(40);
        assert!(matches!(e_poly(30, &x), Err(Error::Precondition(_))));
        assert!(e_poly(30, &p(5)).unwrap().is_zero());
    }
}
