use super::{SwitchConfig, SwitchError};
use crate::types::Value;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Half-open key interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeyRange {
    pub lo: Value,
    pub hi: Value,
}

impl KeyRange {
    pub fn contains(&self, v: Value) -> bool {
        self.lo <= v && v < self.hi
    }
}

impl fmt::Display for KeyRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.lo, self.hi)
    }
}

/// Splits `[0, max_value]` into `segments` ordered, disjoint ranges.
///
/// With `q = max / S` and `r = max % S`, the first `r` ranges have width
/// `q + 1` and the rest width `q`. The last range is stretched to end at
/// `max_value + 1` so that every valid key is covered. This is the only
/// place a division happens; the switch itself only compares.
pub fn set_ranges(config: &SwitchConfig) -> Result<Vec<KeyRange>, SwitchError> {
    config.validate()?;
    let s = config.segments as Value;
    let q = config.max_value / s;
    let r = config.max_value % s;
    let lower = |i: Value| {
        if i < r {
            (q + 1) * i
        } else {
            r * (q + 1) + (i - r) * q
        }
    };
    Ok((0..s)
        .map(|i| KeyRange {
            lo: lower(i),
            hi: if i + 1 == s { config.max_value + 1 } else { lower(i + 1) },
        })
        .collect())
}
