//! Countable orders: posets with a possible top, linear orders with
//! possibly-filled intervals, and posets with a bottom element.

use super::family::Cuts;
use super::seq::SeqInstance;
use crate::coding::{cmp_dyadic, dyadic, pair, unpair};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosetInstance {
    /// Finite poset given by generating strict pairs `(a, b)` meaning `a < b`.
    Finite {
        elements: BTreeSet<u64>,
        less: Vec<(u64, u64)>,
    },
    /// The record positions of `seq`, ordered by position: each new record
    /// is a new top element.
    RecordChain { seq: SeqInstance },
}

impl PosetInstance {
    pub fn finite(elements: impl IntoIterator<Item = u64>, less: Vec<(u64, u64)>) -> Self {
        PosetInstance::Finite {
            elements: elements.into_iter().collect(),
            less,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PosetInstance::Finite { elements, less } = self {
            for &(a, b) in less {
                if !elements.contains(&a) || !elements.contains(&b) {
                    return Err(Error::Parse(format!("order pair ({a},{b}) mentions a non-element")));
                }
            }
            for &a in elements {
                if elements.iter().any(|&b| b != a && self.leq(a, b) && self.leq(b, a)) {
                    return Err(Error::Parse("order relation has a cycle".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, a: u64) -> bool {
        match self {
            PosetInstance::Finite { elements, .. } => elements.contains(&a),
            PosetInstance::RecordChain { seq } => seq.is_record(a),
        }
    }

    /// `a <= b` (false unless both are elements).
    pub fn leq(&self, a: u64, b: u64) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        match self {
            PosetInstance::Finite { less, .. } => {
                let mut reached = BTreeSet::from([a]);
                let mut frontier = vec![a];
                while let Some(x) = frontier.pop() {
                    for &(p, q) in less {
                        if p == x && reached.insert(q) {
                            frontier.push(q);
                        }
                    }
                }
                reached.contains(&b)
            }
            PosetInstance::RecordChain { .. } => a <= b,
        }
    }

    /// The greatest element, if any.
    pub fn top(&self) -> Option<u64> {
        match self {
            PosetInstance::Finite { elements, .. } => {
                elements.iter().copied().find(|&t| elements.iter().all(|&a| self.leq(a, t)))
            }
            PosetInstance::RecordChain { seq } => {
                let (records, finite) = seq.records();
                if finite {
                    records.last().copied()
                } else {
                    None
                }
            }
        }
    }

    /// Least element `s` with `s` not below `a`; `None` when every element
    /// is below `a`.
    pub fn least_not_below(&self, a: u64) -> Option<u64> {
        match self {
            PosetInstance::Finite { elements, .. } => elements.iter().copied().find(|&s| !self.leq(s, a)),
            PosetInstance::RecordChain { seq } => {
                let best = (0..=a).map(|t| seq.at(t)).max().unwrap_or(0);
                seq.first_index_from(a + 1, |v| *v > best)
            }
        }
    }

    pub fn universe(&self) -> u64 {
        match self {
            PosetInstance::Finite { elements, .. } => elements.iter().copied().max().unwrap_or(0),
            PosetInstance::RecordChain { seq } => seq.universe(),
        }
    }
}

/// Position of an element of a filled linear order: interval `n`, and
/// either the left endpoint or a dyadic point of `(0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearPos {
    pub interval: u64,
    pub offset: Option<(u64, u32)>,
}

impl Ord for LinearPos {
    fn cmp(&self, other: &Self) -> Ordering {
        self.interval.cmp(&other.interval).then(match (self.offset, other.offset) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => cmp_dyadic(a, b),
        })
    }
}

impl PartialOrd for LinearPos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The order `(0,0) < (1,0) < ...` in which the interval after `(n,0)`
/// is filled densely from the cut stage of column `n` on. Element
/// `(n,t)` is coded `<n,t>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearOrderInstance {
    pub fills: Cuts,
}

impl LinearOrderInstance {
    pub fn position(&self, a: u64) -> Result<Option<LinearPos>> {
        let (n, t) = unpair(a);
        if t == 0 {
            return Ok(Some(LinearPos { interval: n, offset: None }));
        }
        Ok(match self.fills.cut(n)? {
            Some(c) if t >= c.max(1) => Some(LinearPos {
                interval: n,
                offset: Some(dyadic(t - c.max(1))),
            }),
            _ => None,
        })
    }

    pub fn contains(&self, a: u64) -> Result<bool> {
        Ok(self.position(a)?.is_some())
    }

    pub fn leq(&self, a: u64, b: u64) -> Result<bool> {
        Ok(match (self.position(a)?, self.position(b)?) {
            (Some(pa), Some(pb)) => pa <= pb,
            _ => false,
        })
    }

    /// Whether `a < b` with nothing strictly between. A filled interval
    /// holds all dyadic points, so it has no gaps.
    pub fn is_gap(&self, a: u64, b: u64) -> Result<bool> {
        let (Some(pa), Some(pb)) = (self.position(a)?, self.position(b)?) else {
            return Ok(false);
        };
        if pa >= pb {
            return Ok(false);
        }
        Ok(pb.interval == pa.interval + 1 && pb.offset.is_none() && self.fills.cut(pa.interval)?.is_none())
    }

    pub fn is_non_dense(&self) -> Result<bool> {
        Ok(self.fills.least_uncut()?.is_some())
    }

    pub fn universe(&self) -> u64 {
        self.fills.universe()
    }
}

pub const BOTTOM: u64 = 0;

pub fn column_element(n: u64, s: u64) -> u64 {
    1 + pair(n, s)
}

/// A poset with bottom `0` and columns `(n,0)` coded `1 + <n,0>`; from the
/// cut stage `c` of column `n` on it gains the descending chain
/// `(n,c') > (n,c'+1) > ...` below `(n,0)` with `c' = max(c,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottomedPosetInstance {
    pub columns: Cuts,
}

impl BottomedPosetInstance {
    fn chain_start(&self, n: u64) -> Result<Option<u64>> {
        Ok(self.columns.cut(n)?.map(|c| c.max(1)))
    }

    pub fn contains(&self, a: u64) -> Result<bool> {
        if a == BOTTOM {
            return Ok(true);
        }
        let (n, s) = unpair(a - 1);
        Ok(s == 0 || self.chain_start(n)?.is_some_and(|c| s >= c))
    }

    pub fn leq(&self, a: u64, b: u64) -> Result<bool> {
        if !self.contains(a)? || !self.contains(b)? {
            return Ok(false);
        }
        if a == BOTTOM || a == b {
            return Ok(true);
        }
        if b == BOTTOM {
            return Ok(false);
        }
        let (n, s) = unpair(a - 1);
        let (m, t) = unpair(b - 1);
        Ok(n == m && (t == 0 || (s != 0 && s >= t)))
    }

    /// Minimal among the non-bottom elements.
    pub fn is_atom(&self, a: u64) -> Result<bool> {
        if a == BOTTOM || !self.contains(a)? {
            return Ok(false);
        }
        let (n, s) = unpair(a - 1);
        Ok(s == 0 && self.columns.cut(n)?.is_none())
    }

    pub fn has_atom(&self) -> Result<bool> {
        Ok(self.columns.least_uncut()?.is_some())
    }

    pub fn universe(&self) -> u64 {
        self.columns.universe()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::family::CutDefault;

    fn cuts(ex: &[(u64, Option<u64>)]) -> Cuts {
        Cuts {
            exceptions: ex.iter().copied().collect(),
            default: CutDefault::Never,
        }
    }

    #[test]
    fn poset_top() {
        let p = PosetInstance::finite([3, 5], vec![(3, 5)]);
        assert_eq!(p.top(), Some(5));
        assert_eq!(PosetInstance::finite([1, 2], vec![]).top(), None);
        let chain = PosetInstance::RecordChain {
            seq: SeqInstance::new(vec![2], crate::instance::seq::Tail::Const(1)),
        };
        assert_eq!(chain.top(), Some(0));
    }

    #[test]
    fn gaps_only_at_unfilled_intervals() {
        let l = LinearOrderInstance {
            fills: cuts(&[(0, Some(2))]),
        };
        assert!(!l.is_gap(pair(0, 0), pair(1, 0)).unwrap());
        assert!(l.is_gap(pair(1, 0), pair(2, 0)).unwrap());
        assert!(!l.contains(pair(0, 1)).unwrap());
        assert!(l.contains(pair(0, 2)).unwrap());
        assert!(l.leq(pair(0, 2), pair(1, 0)).unwrap());
        assert!(l.leq(pair(0, 0), pair(0, 2)).unwrap());
    }

    #[test]
    fn atoms_are_uncut_columns() {
        let p = BottomedPosetInstance {
            columns: cuts(&[(1, Some(4))]),
        };
        assert!(p.is_atom(column_element(0, 0)).unwrap());
        assert!(!p.is_atom(column_element(1, 0)).unwrap());
        assert!(p.leq(column_element(1, 5), column_element(1, 4)).unwrap());
        assert!(p.leq(column_element(1, 4), column_element(1, 0)).unwrap());
        assert!(!p.contains(column_element(1, 3)).unwrap());
    }
}
