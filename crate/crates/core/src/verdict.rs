use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// Outcome of a property check at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The data do not carry enough precision to decide.
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn as_option(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Per-level verdicts `v_1..v_k`: level `m` concerns the property modulo `T^m`
/// (or `2^m` over Z2). Levels past the end are `Unknown`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelVerdicts {
    levels: Vec<Verdict>,
}

impl LevelVerdicts {
    pub fn new(levels: Vec<Verdict>) -> Self {
        LevelVerdicts { levels }
    }

    pub fn from_bools(levels: impl IntoIterator<Item = bool>) -> Self {
        LevelVerdicts {
            levels: levels.into_iter().map(Verdict::from_bool).collect(),
        }
    }

    /// Verdict at level `m` (1-based).
    pub fn level(&self, m: u32) -> Verdict {
        if m == 0 {
            return Verdict::Holds;
        }
        self.levels
            .get(m as usize - 1)
            .copied()
            .unwrap_or(Verdict::Unknown)
    }

    pub fn levels(&self) -> &[Verdict] {
        &self.levels
    }

    pub fn len(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Conjunction over the levels: any failure fails, otherwise any unknown
    /// level makes the whole unknown.
    pub fn overall(&self) -> Verdict {
        if self.levels.contains(&Verdict::Fails) {
            Verdict::Fails
        } else if self.levels.contains(&Verdict::Unknown) || self.levels.is_empty() {
            Verdict::Unknown
        } else {
            Verdict::Holds
        }
    }

    /// True iff every level holds.
    pub fn holds(&self) -> bool {
        self.overall() == Verdict::Holds
    }

    /// Number of leading levels that are decided.
    pub fn determined(&self) -> u32 {
        self.levels
            .iter()
            .take_while(|v| **v != Verdict::Unknown)
            .count() as u32
    }

    /// Levels as optional booleans (`None` for unknown).
    pub fn as_options(&self) -> Vec<Option<bool>> {
        self.levels.iter().map(|v| v.as_option()).collect()
    }
}

impl Serialize for LevelVerdicts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LevelVerdicts", 2)?;
        st.serialize_field("levels", &self.as_options())?;
        st.serialize_field("overall", &self.overall().as_option())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let v = LevelVerdicts::from_bools([true, true, true]);
        assert!(v.holds());
        assert_eq!(v.level(4), Verdict::Unknown);
        let v = LevelVerdicts::from_bools([true, false, true]);
        assert_eq!(v.overall(), Verdict::Fails);
        let v = LevelVerdicts::new(vec![Verdict::Holds, Verdict::Unknown]);
        assert_eq!(v.overall(), Verdict::Unknown);
        assert_eq!(v.determined(), 1);
        let v = LevelVerdicts::new(vec![Verdict::Unknown, Verdict::Fails]);
        assert_eq!(v.overall(), Verdict::Fails);
    }

    #[test]
    fn json_shape() {
        let v = LevelVerdicts::new(vec![Verdict::Holds, Verdict::Unknown]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"levels":[true,null],"overall":null}"#);
    }
}
