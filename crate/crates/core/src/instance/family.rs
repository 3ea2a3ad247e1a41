//! Indexed families of sequences `(x_n)` and the column schedules derived
//! from them.

use super::seq::SeqInstance;
use super::Instance;
use crate::error::Result;
use crate::family::Family;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Rule for the columns that have no explicit entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnDefault {
    AllZero,
    /// A single 1 at position `p`, zero elsewhere.
    NonZeroAt(u64),
    /// Column `n` is zero until the watcher for `family[n]` refutes on
    /// `base`, and 1 from that stage on.
    Refutation { family: Family, base: Box<Instance> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySeqInstance {
    #[serde(default)]
    pub exceptions: BTreeMap<u64, SeqInstance>,
    pub default: ColumnDefault,
}

impl FamilySeqInstance {
    pub fn all_zero() -> Self {
        FamilySeqInstance {
            exceptions: BTreeMap::new(),
            default: ColumnDefault::AllZero,
        }
    }

    pub fn with_default(default: ColumnDefault) -> Self {
        FamilySeqInstance {
            exceptions: BTreeMap::new(),
            default,
        }
    }

    pub fn except(mut self, n: u64, x: SeqInstance) -> Self {
        self.exceptions.insert(n, x);
        self
    }

    /// `x_n(k)`.
    pub fn at(&self, n: u64, k: u64) -> Result<u64> {
        if let Some(x) = self.exceptions.get(&n) {
            return Ok(x.at(k));
        }
        Ok(match &self.default {
            ColumnDefault::AllZero => 0,
            ColumnDefault::NonZeroAt(p) => (k == *p) as u64,
            ColumnDefault::Refutation { family, base } => {
                family.refutation_stage(n, base)?.is_some_and(|s| s <= k) as u64
            }
        })
    }

    /// The cut schedule: column `n` is cut at its first nonzero position.
    pub fn cuts(&self) -> Cuts {
        Cuts {
            exceptions: self
                .exceptions
                .iter()
                .map(|(&n, x)| (n, x.first_nonzero()))
                .collect(),
            default: match &self.default {
                ColumnDefault::AllZero => CutDefault::Never,
                ColumnDefault::NonZeroAt(p) => CutDefault::At(*p),
                ColumnDefault::Refutation { family, base } => CutDefault::Refutation {
                    family: family.clone(),
                    base: base.clone(),
                },
            },
        }
    }

    /// Whether every column is `0^∞`.
    pub fn is_all_zero(&self) -> bool {
        matches!(self.default, ColumnDefault::AllZero) && self.exceptions.values().all(|x| x.is_all_zero())
    }

    pub fn universe(&self) -> u64 {
        let ex = self
            .exceptions
            .iter()
            .map(|(&n, x)| n.max(x.universe()))
            .max()
            .unwrap_or(0);
        match &self.default {
            ColumnDefault::AllZero => ex,
            ColumnDefault::NonZeroAt(p) => ex.max(*p),
            ColumnDefault::Refutation { base, .. } => ex.max(base.universe()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutDefault {
    Never,
    At(u64),
    Refutation { family: Family, base: Box<Instance> },
}

/// Per-column cut stages: `None` means the column is never cut. Orders,
/// trees and path graphs built from a family read their shape from this.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cuts {
    #[serde(default)]
    pub exceptions: BTreeMap<u64, Option<u64>>,
    pub default: CutDefault,
}

impl Cuts {
    pub fn never() -> Self {
        Cuts {
            exceptions: BTreeMap::new(),
            default: CutDefault::Never,
        }
    }

    pub fn cut(&self, n: u64) -> Result<Option<u64>> {
        if let Some(c) = self.exceptions.get(&n) {
            return Ok(*c);
        }
        match &self.default {
            CutDefault::Never => Ok(None),
            CutDefault::At(p) => Ok(Some(*p)),
            CutDefault::Refutation { family, base } => family.refutation_stage(n, base),
        }
    }

    pub fn is_uncut(&self, n: u64) -> Result<bool> {
        Ok(self.cut(n)?.is_none())
    }

    /// Least `n >= from` whose column is never cut.
    pub fn next_uncut(&self, from: u64) -> Result<Option<u64>> {
        let explicit = self
            .exceptions
            .range(from..)
            .find(|(_, c)| c.is_none())
            .map(|(&n, _)| n);
        let by_default = match &self.default {
            CutDefault::At(_) => None,
            CutDefault::Never => {
                let mut n = from;
                while self.exceptions.contains_key(&n) {
                    n += 1;
                }
                Some(n)
            }
            CutDefault::Refutation { family, base } => {
                let mut next = family.next_member(base, from)?;
                while let Some(n) = next {
                    if !self.exceptions.contains_key(&n) {
                        break;
                    }
                    next = family.next_member(base, n + 1)?;
                }
                next
            }
        };
        Ok(match (explicit, by_default) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
    }

    pub fn least_uncut(&self) -> Result<Option<u64>> {
        self.next_uncut(0)
    }

    pub fn universe(&self) -> u64 {
        let ex = self
            .exceptions
            .iter()
            .map(|(&n, c)| n.max(c.unwrap_or(0)))
            .max()
            .unwrap_or(0);
        match &self.default {
            CutDefault::Never => ex,
            CutDefault::At(p) => ex.max(*p),
            CutDefault::Refutation { base, .. } => ex.max(base.universe()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_follow_default_and_exceptions() {
        let f = FamilySeqInstance::all_zero().except(0, SeqInstance::spike(2));
        assert_eq!(f.at(0, 2).unwrap(), 1);
        assert_eq!(f.at(3, 2).unwrap(), 0);
        let g = FamilySeqInstance::with_default(ColumnDefault::NonZeroAt(4));
        assert_eq!(g.at(7, 4).unwrap(), 1);
        assert_eq!(g.at(7, 3).unwrap(), 0);
    }

    #[test]
    fn least_uncut_skips_cut_columns() {
        let f = FamilySeqInstance::all_zero()
            .except(0, SeqInstance::spike(2))
            .except(1, SeqInstance::spike(0));
        assert_eq!(f.cuts().least_uncut().unwrap(), Some(2));
        let g = FamilySeqInstance::with_default(ColumnDefault::NonZeroAt(1)).except(5, SeqInstance::zeros());
        assert_eq!(g.cuts().least_uncut().unwrap(), Some(5));
        assert_eq!(g.cuts().next_uncut(6).unwrap(), None);
    }
}
