//! JSON file formats. Every residue is written as the hex string of its
//! canonical integer; coefficient indices are decimal strings.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::carlitz::{from_carlitz, CarlitzCoefficients};
use crate::cyclegen::CycleData;
use crate::dynamics::{FunctionTable, MAX_TABLE_PRECISION};
use crate::error::{Error, Result};
use crate::gf2ps::{format_hex, parse_hex_u64, Residue};
use crate::vanderput::VdpCoefficients;
use crate::z2compare::{
    mahler_eval, vdp_eval_z2, MahlerCoefficients, Z2FunctionTable, Z2Residue, Z2VdpCoefficients,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    F2T,
    Z2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Vanderput,
    Carlitz,
    Mahler,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    ring: Ring,
    precision: u32,
    table: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffFile {
    ring: Ring,
    basis: Basis,
    precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<u64>,
    coeffs: BTreeMap<u64, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleFile {
    n: u32,
    levels: BTreeMap<u32, String>,
}

/// A function table together with the ring it is read over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDoc {
    pub ring: Ring,
    pub table: FunctionTable,
}

impl TableDoc {
    pub fn z2(&self) -> Z2FunctionTable {
        Z2FunctionTable::from_f2(self.table.clone())
    }
}

/// Any of the supported coefficient sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Vdp(VdpCoefficients),
    Carlitz(CarlitzCoefficients),
    Z2Vdp(Z2VdpCoefficients),
    Mahler(MahlerCoefficients),
}

impl Coefficients {
    pub fn ring(&self) -> Ring {
        match self {
            Coefficients::Vdp(_) | Coefficients::Carlitz(_) => Ring::F2T,
            Coefficients::Z2Vdp(_) | Coefficients::Mahler(_) => Ring::Z2,
        }
    }

    pub fn basis(&self) -> Basis {
        match self {
            Coefficients::Vdp(_) | Coefficients::Z2Vdp(_) => Basis::Vanderput,
            Coefficients::Carlitz(_) => Basis::Carlitz,
            Coefficients::Mahler(_) => Basis::Mahler,
        }
    }

    pub fn precision(&self) -> u32 {
        match self {
            Coefficients::Vdp(c) => c.precision(),
            Coefficients::Carlitz(c) => c.precision(),
            Coefficients::Z2Vdp(c) => c.precision(),
            Coefficients::Mahler(c) => c.precision(),
        }
    }

    /// The expansion tabulated modulo `T^k` (or `2^k` over `Z2`), for `k` up
    /// to the coefficient precision.
    pub fn to_table(&self, prec: u32) -> Result<FunctionTable> {
        let have = self.precision();
        if prec == 0 || prec > have {
            return Err(Error::InsufficientPrecision { need: prec, have });
        }
        let m = (1u64 << prec) - 1;
        let head = |v: &[u64]| v[..=m as usize].iter().map(|x| x & m).collect::<Vec<_>>();
        match self {
            Coefficients::Vdp(c) => Ok(VdpCoefficients::new(prec, head(c.coeffs()))?.to_table()),
            Coefficients::Carlitz(c) => c.truncate(prec)?.to_table(),
            Coefficients::Z2Vdp(c) => Ok(Z2VdpCoefficients::new(prec, head(c.coeffs()))?
                .to_table()
                .into_f2()),
            Coefficients::Mahler(c) => {
                let a = c.coeffs().iter().map(|x| x & m).collect();
                Ok(MahlerCoefficients::new(prec, a)?.to_table().into_f2())
            }
        }
    }

    /// The expansion at the canonical representative `x` of a residue modulo
    /// `T^prec` (or `2^prec`), reduced to that precision.
    pub fn eval(&self, x: u64, prec: u32) -> Result<u64> {
        let have = self.precision();
        if prec == 0 || prec > have {
            return Err(Error::InsufficientPrecision { need: prec, have });
        }
        let m = if prec == 64 {
            u64::MAX
        } else {
            (1u64 << prec) - 1
        };
        if x & !m != 0 {
            return Err(Error::OutOfRange { value: x, prec });
        }
        let value = match self {
            Coefficients::Vdp(c) => c.eval(x),
            Coefficients::Carlitz(c) => {
                from_carlitz(&c.truncate(prec)?, Residue::new(x, prec)?)?.bits()
            }
            Coefficients::Z2Vdp(c) => vdp_eval_z2(c, Z2Residue::new(x, have)?)?.value(),
            Coefficients::Mahler(c) => mahler_eval(c, Z2Residue::new(x, have)?)?.value(),
        };
        Ok(value & m)
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_entries<'a>(items: impl IntoIterator<Item = &'a String>) -> Result<Vec<u64>> {
    items.into_iter().map(|s| parse_hex_u64(s)).collect()
}

pub fn parse_table(json: &str) -> Result<TableDoc> {
    let f: TableFile = serde_json::from_str(json)?;
    let table = FunctionTable::new(f.precision, parse_entries(&f.table)?)?;
    Ok(TableDoc {
        ring: f.ring,
        table,
    })
}

pub fn table_to_json(ring: Ring, t: &FunctionTable) -> String {
    let f = TableFile {
        ring,
        precision: t.precision(),
        table: t.entries().iter().map(|&v| format_hex(v)).collect(),
    };
    serde_json::to_string(&f).expect("plain data serializes")
}

pub fn load_table(path: &Path) -> Result<TableDoc> {
    parse_table(&read_file(path)?)
}

fn dense(prec: u32, coeffs: &BTreeMap<u64, u64>) -> Result<Vec<u64>> {
    if prec == 0 || prec > MAX_TABLE_PRECISION {
        return Err(Error::InvalidPrecision {
            prec,
            max: MAX_TABLE_PRECISION,
        });
    }
    let size = 1u64 << prec;
    let mut out = vec![0u64; size as usize];
    for (&m, &v) in coeffs {
        if m >= size {
            return Err(Error::Parse(format!(
                "index {m} out of range at precision {prec}"
            )));
        }
        out[m as usize] = v;
    }
    Ok(out)
}

pub fn parse_coefficients(json: &str) -> Result<Coefficients> {
    let f: CoeffFile = serde_json::from_str(json)?;
    let k = f.precision;
    let values: BTreeMap<u64, u64> = f
        .coeffs
        .iter()
        .map(|(&n, s)| Ok((n, parse_hex_u64(s)?)))
        .collect::<Result<_>>()?;
    match (f.ring, f.basis) {
        (Ring::F2T, Basis::Vanderput) => {
            Ok(Coefficients::Vdp(VdpCoefficients::from_sparse(k, values)?))
        }
        (Ring::F2T, Basis::Carlitz) => Ok(Coefficients::Carlitz(CarlitzCoefficients::from_pairs(
            k, f.bound, values,
        )?)),
        (Ring::Z2, Basis::Vanderput) => Ok(Coefficients::Z2Vdp(Z2VdpCoefficients::new(
            k,
            dense(k, &values)?,
        )?)),
        (Ring::Z2, Basis::Mahler) => {
            let len = match (f.bound, values.keys().next_back()) {
                (Some(b), Some(&top)) if top > b => {
                    return Err(Error::Parse(format!("index {top} exceeds bound {b}")))
                }
                (Some(b), _) => b + 1,
                (None, Some(&top)) => top + 1,
                (None, None) => 0,
            };
            if len > 1 << 20 {
                return Err(Error::Parse(format!("Mahler bound {} too large", len - 1)));
            }
            let mut a = vec![0u64; len as usize];
            for (n, v) in values {
                a[n as usize] = v;
            }
            Ok(Coefficients::Mahler(MahlerCoefficients::new(k, a)?))
        }
        (ring, basis) => Err(Error::Parse(format!(
            "basis {basis:?} is not defined over {ring:?}"
        ))),
    }
}

pub fn coefficients_to_json(c: &Coefficients) -> String {
    let nonzero = |items: &mut dyn Iterator<Item = (u64, u64)>| -> BTreeMap<u64, String> {
        items
            .filter(|&(_, v)| v != 0)
            .map(|(n, v)| (n, format_hex(v)))
            .collect()
    };
    let (coeffs, bound) = match c {
        Coefficients::Vdp(c) => (
            nonzero(&mut c.coeffs().iter().enumerate().map(|(n, &v)| (n as u64, v))),
            None,
        ),
        Coefficients::Z2Vdp(c) => (
            nonzero(&mut c.coeffs().iter().enumerate().map(|(n, &v)| (n as u64, v))),
            None,
        ),
        Coefficients::Carlitz(c) => (
            nonzero(&mut c.iter().map(|(n, a)| (n, a.bits()))),
            c.bound(),
        ),
        Coefficients::Mahler(c) => (
            nonzero(&mut c.coeffs().iter().enumerate().map(|(n, &v)| (n as u64, v))),
            c.bound(),
        ),
    };
    let f = CoeffFile {
        ring: c.ring(),
        basis: c.basis(),
        precision: c.precision(),
        bound,
        coeffs,
    };
    serde_json::to_string(&f).expect("plain data serializes")
}

pub fn load_coefficients(path: &Path) -> Result<Coefficients> {
    parse_coefficients(&read_file(path)?)
}

pub fn parse_cycle_data(json: &str) -> Result<CycleData> {
    let f: CycleFile = serde_json::from_str(json)?;
    if f.levels.keys().any(|&k| k == 0 || k > f.n) {
        return Err(Error::MalformedCycleData(format!(
            "levels must be numbered 1..={}",
            f.n
        )));
    }
    let levels = (1..=f.n)
        .map(|k| {
            let s = f
                .levels
                .get(&k)
                .ok_or_else(|| Error::MalformedCycleData(format!("missing level {k}")))?;
            s.chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::MalformedCycleData(format!(
                        "bad bit {ch:?} at level {k}"
                    ))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    CycleData::new(f.n, levels)
}

pub fn cycle_data_to_json(d: &CycleData) -> String {
    let levels = d
        .levels()
        .iter()
        .enumerate()
        .map(|(i, bits)| {
            (
                i as u32 + 1,
                bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            )
        })
        .collect();
    serde_json::to_string(&CycleFile {
        n: d.depth(),
        levels,
    })
    .expect("plain data serializes")
}

pub fn load_cycle_data(path: &Path) -> Result<CycleData> {
    parse_cycle_data(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::ergodic_example;

    #[test]
    fn table_roundtrip() {
        let t = FunctionTable::from_fn(3, |x| x ^ 5).unwrap();
        let json = table_to_json(Ring::F2T, &t);
        assert!(json.contains("\"ring\":\"F2T\""));
        let doc = parse_table(&json).unwrap();
        assert_eq!(
            doc,
            TableDoc {
                ring: Ring::F2T,
                table: t
            }
        );
    }

    #[test]
    fn table_errors() {
        assert!(parse_table(r#"{"ring":"F2T","precision":2,"table":["0x0"]}"#).is_err());
        assert!(parse_table(r#"{"ring":"F2T","precision":1,"table":["0x0","0x2"]}"#).is_err());
        assert!(parse_table(r#"{"ring":"Q","precision":1,"table":["0x0","0x1"]}"#).is_err());
        assert!(parse_table("not json").is_err());
    }

    #[test]
    fn coefficient_roundtrips() {
        let ex = Coefficients::Carlitz(ergodic_example(12).unwrap());
        let json = coefficients_to_json(&ex);
        assert!(json.contains("\"2047\":\"0x800\""));
        assert_eq!(parse_coefficients(&json).unwrap(), ex);

        let json =
            r#"{"ring":"F2T","basis":"vanderput","precision":3,"coeffs":{"1":"0x1","2":"0x2"}}"#;
        let c = parse_coefficients(json).unwrap();
        assert_eq!(parse_coefficients(&coefficients_to_json(&c)).unwrap(), c);

        let json = r#"{"ring":"Z2","basis":"mahler","precision":8,"coeffs":{"0":"0x1","1":"0x1"}}"#;
        let c = parse_coefficients(json).unwrap();
        assert!(matches!(&c, Coefficients::Mahler(m) if m.coeffs() == [1, 1]));
        assert_eq!(parse_coefficients(&coefficients_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn coefficient_errors() {
        let bad = [
            r#"{"ring":"Z2","basis":"carlitz","precision":3,"coeffs":{}}"#,
            r#"{"ring":"F2T","basis":"vanderput","precision":3,"coeffs":{"8":"0x1"}}"#,
            r#"{"ring":"F2T","basis":"vanderput","precision":3,"coeffs":{"1":"0x8"}}"#,
            r#"{"ring":"F2T","basis":"vanderput","precision":3,"coeffs":{"x":"0x1"}}"#,
            r#"{"ring":"Z2","basis":"mahler","precision":3,"bound":1,"coeffs":{"2":"0x1"}}"#,
        ];
        for json in bad {
            assert!(parse_coefficients(json).is_err(), "{json}");
        }
    }

    #[test]
    fn tables_at_lower_precision() {
        let ex = Coefficients::Carlitz(ergodic_example(6).unwrap());
        assert_eq!(ex.to_table(2).unwrap().entries(), &[1, 2, 3, 0]);
        assert!(ex.to_table(7).is_err());
        let json = r#"{"ring":"Z2","basis":"mahler","precision":8,"coeffs":{"0":"0x1","1":"0x1"}}"#;
        let c = parse_coefficients(json).unwrap();
        assert_eq!(c.to_table(3).unwrap().entries(), &[1, 2, 3, 4, 5, 6, 7, 0]);
        let id = Coefficients::Vdp(crate::vanderput::to_vdp(
            &FunctionTable::identity(5).unwrap(),
        ));
        assert_eq!(id.to_table(3).unwrap(), FunctionTable::identity(3).unwrap());
    }

    #[test]
    fn cycle_data_roundtrip() {
        let json = r#"{"n":2,"levels":{"1":"10","2":"0110"}}"#;
        let d = parse_cycle_data(json).unwrap();
        assert!(d.bit(1, 0) && !d.bit(1, 1) && d.bit(2, 1));
        assert_eq!(parse_cycle_data(&cycle_data_to_json(&d)).unwrap(), d);
        assert!(parse_cycle_data(r#"{"n":1,"levels":{"1":"101"}}"#).is_err());
        assert!(parse_cycle_data(r#"{"n":1,"levels":{}}"#).is_err());
        assert!(parse_cycle_data(r#"{"n":1,"levels":{"1":"1x"}}"#).is_err());
    }

    #[test]
    fn eval_agrees_with_tables() {
        let c = Coefficients::Carlitz(ergodic_example(6).unwrap());
        for prec in 1..=6 {
            let t = c.to_table(prec).unwrap();
            for x in 0..1u64 << prec {
                assert_eq!(c.eval(x, prec).unwrap(), t.get(x));
            }
        }
        let m = Coefficients::Mahler(MahlerCoefficients::new(5, vec![1, 5, 8]).unwrap());
        let t = m.to_table(3).unwrap();
        assert!((0..8).all(|x| m.eval(x, 3).unwrap() == t.get(x)));
        assert!(m.eval(8, 3).is_err());
        assert!(m.eval(0, 6).is_err());
    }
}
