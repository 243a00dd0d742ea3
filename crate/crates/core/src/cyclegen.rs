//! Single-cycle generator.
//!
//! From free bits `a(k, j)`, `1 <= k <= n`, `0 <= j < 2^k`, build a sequence
//! `x_0, .., x_{2^{n+1}-1}` that runs through every residue modulo `T^{n+1}`;
//! the successor map `x_j -> x_{j+1}` is transitive at every level.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{FunctionTable, MAX_TABLE_PRECISION};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleData {
    n: u32,
    levels: Vec<Vec<bool>>,
}

impl CycleData {
    /// `levels[k - 1]` holds `a(k, 0) .. a(k, 2^k - 1)`.
    pub fn new(n: u32, levels: Vec<Vec<bool>>) -> Result<Self> {
        if n >= MAX_TABLE_PRECISION {
            return Err(Error::MalformedCycleData(format!(
                "depth {n} exceeds {}",
                MAX_TABLE_PRECISION - 1
            )));
        }
        if levels.len() != n as usize {
            return Err(Error::MalformedCycleData(format!(
                "expected {n} levels, got {}",
                levels.len()
            )));
        }
        for (idx, bits) in levels.iter().enumerate() {
            let k = idx + 1;
            if bits.len() != 1 << k {
                return Err(Error::MalformedCycleData(format!(
                    "level {k} needs {} bits, got {}",
                    1u64 << k,
                    bits.len()
                )));
            }
        }
        Ok(CycleData { n, levels })
    }

    /// All bits zero.
    pub fn zeros(n: u32) -> Result<Self> {
        CycleData::new(n, (1..=n).map(|k| vec![false; 1 << k]).collect())
    }

    pub fn depth(&self) -> u32 {
        self.n
    }

    pub fn levels(&self) -> &[Vec<bool>] {
        &self.levels
    }

    /// `a(k, j)`.
    pub fn bit(&self, k: u32, j: usize) -> bool {
        self.levels[k as usize - 1][j]
    }

    pub fn set_bit(&mut self, k: u32, j: usize, value: bool) {
        self.levels[k as usize - 1][j] = value;
    }

    /// Complements every bit of level `k`.
    pub fn flip_level(&mut self, k: u32) {
        self.levels[k as usize - 1]
            .iter_mut()
            .for_each(|b| *b = !*b);
    }

    /// Packs the bits level by level (`a(1, 0)` first) into an integer;
    /// only meaningful while the total is at most 64 bits.
    pub fn from_index(n: u32, mut index: u64) -> Result<Self> {
        let mut d = CycleData::zeros(n)?;
        for k in 1..=n {
            for j in 0..1usize << k {
                d.set_bit(k, j, index & 1 == 1);
                index >>= 1;
            }
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedCycle {
    pub sequence: Vec<u64>,
    pub table: FunctionTable,
}

pub fn gen_cycle(d: &CycleData) -> Result<GeneratedCycle> {
    let n = d.n;
    let len = 1usize << (n + 1);
    let mut x = vec![0u64; len];
    x[1] = 1;
    for k in 1..=n {
        let tk = 1u64 << k;
        let half = 1usize << k;
        for (j, xj) in x[..half].iter_mut().enumerate() {
            if d.bit(k, j) {
                *xj ^= tk;
            }
        }
        for j in half..2 * half {
            x[j] = x[j - half] ^ tk;
        }
    }
    let mut table = vec![0u64; len];
    for j in 0..len {
        table[x[j] as usize] = x[(j + 1) % len];
    }
    Ok(GeneratedCycle {
        sequence: x,
        table: FunctionTable::new(n + 1, table)?,
    })
}

/// Seeded pseudo-random cycle data.
pub fn random_data(seed: u64, n: u32) -> Result<CycleData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CycleData::new(
        n,
        (1..=n)
            .map(|k| (0..1usize << k).map(|_| rng.random()).collect())
            .collect(),
    )
}
