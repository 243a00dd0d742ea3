use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use super::clmul::clmul64;
use super::residue::Residue;
use super::{Degree, Valuation};
use crate::error::{Error, Result};

/// Operand length (in limbs) below which multiplication is schoolbook.
const KARATSUBA_THRESHOLD: usize = 24;

/// An exact polynomial in F2[T], stored as little-endian 64-bit limbs.
/// Bit `i` of the limb vector is the coefficient of `T^i`; no trailing zero limbs.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    limbs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { limbs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::from_u64(1)
    }

    /// The monomial `T^d`.
    pub fn monomial(d: u64) -> Poly {
        let mut limbs = vec![0u64; (d / 64) as usize + 1];
        limbs[(d / 64) as usize] = 1 << (d % 64);
        Poly { limbs }
    }

    pub fn from_u64(bits: u64) -> Poly {
        Poly::from_limbs(vec![bits])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Poly {
        normalize(&mut limbs);
        Poly { limbs }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// Degree in `T`; the zero polynomial has degree `-inf`.
    pub fn degree(&self) -> Degree {
        match self.limbs.last() {
            None => Degree::NegInfinity,
            Some(&top) => {
                Degree::Finite((self.limbs.len() as u64 - 1) * 64 + 63 - top.leading_zeros() as u64)
            }
        }
    }

    /// `T`-adic order (index of the lowest set bit).
    pub fn ord(&self) -> Valuation {
        for (i, &l) in self.limbs.iter().enumerate() {
            if l != 0 {
                return Valuation::Finite(i as u32 * 64 + l.trailing_zeros());
            }
        }
        Valuation::Infinite
    }

    pub fn coeff(&self, i: u64) -> bool {
        let w = (i / 64) as usize;
        w < self.limbs.len() && (self.limbs[w] >> (i % 64)) & 1 == 1
    }

    /// The value as a word, if the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    /// Reduction modulo `T^k` (`k <= 64`).
    pub fn to_residue(&self, prec: u32) -> Result<Residue> {
        Residue::reduce(self.limbs.first().copied().unwrap_or(0), prec)
    }

    /// Canonical representative of a residue.
    pub fn from_residue(r: Residue) -> Poly {
        Poly::from_u64(r.bits())
    }

    /// Product reduced modulo `T^k`; depends only on the inputs mod `T^k`.
    pub fn mul_mod(&self, other: &Poly, prec: u32) -> Result<Residue> {
        let a = self.to_residue(prec)?;
        let b = other.to_residue(prec)?;
        a.checked_mul(b)
    }

    /// `self * T^s`.
    pub fn shl(&self, s: u64) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let words = (s / 64) as usize;
        let bits = (s % 64) as u32;
        let mut limbs = vec![0u64; words];
        limbs.reserve(self.limbs.len() + 1);
        if bits == 0 {
            limbs.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for &l in &self.limbs {
                limbs.push((l << bits) | carry);
                carry = l >> (64 - bits);
            }
            limbs.push(carry);
        }
        Poly::from_limbs(limbs)
    }

    /// Product with a polynomial of degree < 64.
    pub fn mul_word(&self, w: u64) -> Poly {
        if w == 0 || self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            let p = clmul64(l, w);
            out[i] ^= p as u64;
            out[i + 1] ^= (p >> 64) as u64;
        }
        Poly::from_limbs(out)
    }

    pub fn square(&self) -> Poly {
        // Frobenius: spread each bit to an even position.
        let mut out = Vec::with_capacity(self.limbs.len() * 2);
        for &l in &self.limbs {
            out.push(spread32(l as u32));
            out.push(spread32((l >> 32) as u32));
        }
        Poly::from_limbs(out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Degree::Finite(db) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let mut rem = self.limbs.clone();
        let da = match self.degree() {
            Degree::Finite(d) if d >= db => d,
            _ => return Ok((Poly::zero(), self.clone())),
        };
        let mut quot = vec![0u64; ((da - db) / 64) as usize + 1];
        let mut top = da;
        loop {
            if (rem[(top / 64) as usize] >> (top % 64)) & 1 == 1 {
                let s = top - db;
                quot[(s / 64) as usize] |= 1 << (s % 64);
                xor_shifted(&mut rem, &divisor.limbs, s);
            }
            if top == db {
                break;
            }
            top -= 1;
        }
        Ok((Poly::from_limbs(quot), Poly::from_limbs(rem)))
    }

    /// Quotient of an exact division; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }

    pub fn from_hex(s: &str) -> Result<Poly> {
        let digits = super::strip_hex_prefix(s)?;
        let mut limbs = Vec::with_capacity(digits.len() / 16 + 1);
        let bytes = digits.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).expect("ascii");
            limbs.push(u64::from_str_radix(chunk, 16).map_err(|e| Error::Parse(e.to_string()))?);
            end = start;
        }
        Ok(Poly::from_limbs(limbs))
    }

    pub fn to_hex(&self) -> String {
        format!("{self}")
    }
}

fn normalize(limbs: &mut Vec<u64>) {
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
}

fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// `dst ^= src * T^s`, where `dst` is long enough to hold the result.
fn xor_shifted(dst: &mut [u64], src: &[u64], s: u64) {
    let words = (s / 64) as usize;
    let bits = (s % 64) as u32;
    if bits == 0 {
        for (i, &l) in src.iter().enumerate() {
            dst[words + i] ^= l;
        }
    } else {
        let mut carry = 0u64;
        for (i, &l) in src.iter().enumerate() {
            dst[words + i] ^= (l << bits) | carry;
            carry = l >> (64 - bits);
        }
        if carry != 0 {
            dst[words + src.len()] ^= carry;
        }
    }
}

fn mul_schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = clmul64(x, y);
            out[i + j] ^= p as u64;
            out[i + j + 1] ^= (p >> 64) as u64;
        }
    }
}

/// `out ^= a * b`; `out.len() >= a.len() + b.len()`.
fn mul_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let n = a.len().min(b.len());
    if n < KARATSUBA_THRESHOLD {
        mul_schoolbook(a, b, out);
        return;
    }
    if a.len() != b.len() {
        // Split the longer operand into chunks the size of the shorter one.
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        for (c, chunk) in long.chunks(short.len()).enumerate() {
            mul_into(chunk, short, &mut out[c * short.len()..]);
        }
        return;
    }
    // Karatsuba on equal halves: a = a0 + a1 X, b = b0 + b1 X.
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let mut z0 = vec![0u64; 2 * h];
    mul_into(a0, b0, &mut z0);
    let mut z2 = vec![0u64; a1.len() + b1.len()];
    mul_into(a1, b1, &mut z2);
    let mut sa = a1.to_vec();
    for (i, &x) in a0.iter().enumerate() {
        sa[i] ^= x;
    }
    let mut sb = b1.to_vec();
    for (i, &x) in b0.iter().enumerate() {
        sb[i] ^= x;
    }
    let mut z1 = vec![0u64; sa.len() + sb.len()];
    mul_into(&sa, &sb, &mut z1);
    for (i, &x) in z0.iter().enumerate() {
        z1[i] ^= x;
    }
    for (i, &x) in z2.iter().enumerate() {
        z1[i] ^= x;
    }
    for (i, &x) in z0.iter().enumerate() {
        out[i] ^= x;
    }
    for (i, &x) in z1.iter().enumerate() {
        if x != 0 {
            out[h + i] ^= x;
        }
    }
    for (i, &x) in z2.iter().enumerate() {
        out[2 * h + i] ^= x;
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut limbs = long.limbs.clone();
        for (i, &l) in short.limbs.iter().enumerate() {
            limbs[i] ^= l;
        }
        Poly::from_limbs(limbs)
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (i, &l) in rhs.limbs.iter().enumerate() {
            self.limbs[i] ^= l;
        }
        normalize(&mut self.limbs);
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.limbs.len() == 1 {
            return self.mul_word(rhs.limbs[0]);
        }
        if self.limbs.len() == 1 {
            return rhs.mul_word(self.limbs[0]);
        }
        let mut out = vec![0u64; self.limbs.len() + rhs.limbs.len()];
        mul_into(&self.limbs, &rhs.limbs, &mut out);
        Poly::from_limbs(out)
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl From<u64> for Poly {
    fn from(bits: u64) -> Poly {
        Poly::from_u64(bits)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.limbs.split_last() {
            None => write!(f, "0x0"),
            Some((top, rest)) => {
                write!(f, "{top:#x}")?;
                for l in rest.iter().rev() {
                    write!(f, "{l:016x}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
