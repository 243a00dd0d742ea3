//! Finite-model dynamics on `F2[[T]]/T^k`.
//!
//! A [`FunctionTable`] lists `f(x)` for every residue `x`, indexed by the
//! canonical integer of `x`. The oracles here decide compatibility,
//! bijectivity and transitivity level by level by brute force; the criteria in
//! [`crate::vanderput`] and [`crate::carlitz`] are tested against them.
//!
//! Level checks run on the rayon pool. Every check is a pure reduction over
//! booleans, so verdicts do not depend on how the work is split.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2ps::Residue;
use crate::verdict::LevelVerdicts;

/// Largest precision for which a full table (2^k entries) may be built.
pub const MAX_TABLE_PRECISION: u32 = 26;

#[inline]
fn mask(m: u32) -> u64 {
    (1u64 << m) - 1
}

/// A map `F2[[T]]/T^k -> F2[[T]]/T^k` as an explicit table of `2^k` entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FunctionTable {
    prec: u32,
    table: Vec<u64>,
}

impl FunctionTable {
    pub fn new(prec: u32, table: Vec<u64>) -> Result<Self> {
        if prec == 0 || prec > MAX_TABLE_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_TABLE_PRECISION,
            });
        }
        if table.len() as u64 != 1u64 << prec {
            return Err(Error::MalformedTable(format!(
                "expected {} entries at precision {prec}, got {}",
                1u64 << prec,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v > mask(prec)) {
            return Err(Error::OutOfRange { value: bad, prec });
        }
        Ok(FunctionTable { prec, table })
    }

    /// Tabulates `f` on all residues; outputs are reduced mod `T^k`.
    pub fn from_fn(prec: u32, f: impl Fn(u64) -> u64 + Sync) -> Result<Self> {
        if prec == 0 || prec > MAX_TABLE_PRECISION {
            return Err(Error::InvalidPrecision {
                prec,
                max: MAX_TABLE_PRECISION,
            });
        }
        let m = mask(prec);
        let table = (0..=m).into_par_iter().map(|x| f(x) & m).collect();
        Ok(FunctionTable { prec, table })
    }

    pub fn identity(prec: u32) -> Result<Self> {
        FunctionTable::from_fn(prec, |x| x)
    }

    #[inline]
    pub fn precision(&self) -> u32 {
        self.prec
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.table
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.table
    }

    /// `f(x)` for a canonical index `x < 2^k`.
    #[inline]
    pub fn get(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    pub fn apply(&self, x: Residue) -> Result<Residue> {
        if x.precision() != self.prec {
            return Err(Error::PrecisionMismatch(x.precision(), self.prec));
        }
        Residue::new(self.get(x.bits()), self.prec)
    }

    /// The induced table modulo `T^m` on canonical representatives,
    /// `x -> f(x) mod T^m` for `x < 2^m`. Meaningful for compatible tables.
    pub fn reduce(&self, m: u32) -> Result<FunctionTable> {
        if m == 0 || m > self.prec {
            return Err(Error::InsufficientPrecision {
                need: m,
                have: self.prec,
            });
        }
        let mk = mask(m);
        let table = self.table[..=mk as usize].iter().map(|v| v & mk).collect();
        Ok(FunctionTable { prec: m, table })
    }

    fn levels(&self, check: impl Fn(u32) -> bool + Sync + Send) -> LevelVerdicts {
        let v: Vec<bool> = (1..=self.prec).into_par_iter().map(check).collect();
        LevelVerdicts::from_bools(v)
    }

    fn compatible_at(&self, m: u32) -> bool {
        let mk = mask(m);
        self.table
            .par_iter()
            .enumerate()
            .all(|(x, &fx)| (fx ^ self.table[x & mk as usize]) & mk == 0)
    }

    fn bijective_at(&self, m: u32) -> bool {
        let mk = mask(m);
        let mut seen = vec![0u64; (1usize << m).div_ceil(64)];
        for &fx in &self.table[..=mk as usize] {
            let y = (fx & mk) as usize;
            let (w, b) = (y / 64, y % 64);
            if seen[w] >> b & 1 == 1 {
                return false;
            }
            seen[w] |= 1 << b;
        }
        true
    }

    /// Walks the orbit of 0 modulo `T^m`; transitive iff the first return to 0
    /// happens after exactly `2^m` steps.
    fn transitive_at(&self, m: u32) -> bool {
        let mk = mask(m);
        let n = 1u64 << m;
        let mut x = 0u64;
        for step in 1..=n {
            x = self.table[x as usize] & mk;
            if x == 0 {
                return step == n;
            }
        }
        false
    }

    /// Length of the cycle through `x0` modulo `T^k`, or `None` if `x0` is not
    /// on a cycle.
    pub fn cycle_length(&self, x0: u64) -> Option<u64> {
        let n = 1u64 << self.prec;
        let mut x = x0;
        for step in 1..=n {
            x = self.table[x as usize];
            if x == x0 {
                return Some(step);
            }
        }
        None
    }
}

/// Level `m` holds iff `x = y mod T^m` implies `f(x) = f(y) mod T^m`.
pub fn is_compatible(t: &FunctionTable) -> LevelVerdicts {
    t.levels(|m| t.compatible_at(m))
}

/// Level `m` holds iff `x -> f(x) mod T^m` permutes the `2^m` residues.
pub fn is_bijective_mod(t: &FunctionTable) -> LevelVerdicts {
    t.levels(|m| t.bijective_at(m))
}

/// Level `m` holds iff `f mod T^m` is a single cycle on the `2^m` residues.
pub fn is_transitive_mod(t: &FunctionTable) -> LevelVerdicts {
    t.levels(|m| t.transitive_at(m))
}

/// Parity criterion for lifting transitivity from `T^n` to `T^{n+1}`: true iff
/// the number of `x` with `deg x < n` whose image has `T^n`-coefficient 1 is odd.
///
/// The table must have precision `> n`, be compatible and bijective at levels
/// `1..=n+1`, and be transitive modulo `T^n`.
pub fn parity_lift(t: &FunctionTable, n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition(
            "lift level n must be at least 1".into(),
        ));
    }
    if t.prec < n + 1 {
        return Err(Error::InsufficientPrecision {
            need: n + 1,
            have: t.prec,
        });
    }
    for m in 1..=n + 1 {
        if !t.compatible_at(m) {
            return Err(Error::Precondition(format!("not compatible at level {m}")));
        }
        if !t.bijective_at(m) {
            return Err(Error::Precondition(format!("not bijective at level {m}")));
        }
    }
    if !t.transitive_at(n) {
        return Err(Error::Precondition(format!("not transitive modulo T^{n}")));
    }
    let count = t.table[..1usize << n]
        .iter()
        .filter(|&&fx| (fx >> n) & 1 == 1)
        .count();
    Ok(count % 2 == 1)
}

/// `[x0, f(x0), ..., f^(steps-1)(x0)]`.
pub fn orbit(t: &FunctionTable, x0: Residue, steps: usize) -> Result<Vec<Residue>> {
    if x0.precision() != t.prec {
        return Err(Error::PrecisionMismatch(x0.precision(), t.prec));
    }
    let mut out = Vec::with_capacity(steps);
    let mut x = x0.bits();
    for _ in 0..steps {
        out.push(Residue::new(x, t.prec)?);
        x = t.get(x);
    }
    Ok(out)
}
