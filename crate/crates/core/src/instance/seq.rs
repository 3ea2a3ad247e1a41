//! Eventually-regular sequences: a finite prefix followed by a tail rule.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail<T> {
    Const(T),
    /// Repeats the word forever; the word is nonempty.
    Periodic(Vec<T>),
    /// The value at index `n` is `n`.
    Ramp,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seq<T> {
    pub prefix: Vec<T>,
    pub tail: Tail<T>,
}

pub type SeqInstance = Seq<u64>;

pub trait FromIndex {
    fn from_index(n: u64) -> Self;
}

impl FromIndex for u64 {
    fn from_index(n: u64) -> Self {
        n
    }
}

impl<T: Clone + FromIndex> Seq<T> {
    pub fn new(prefix: Vec<T>, tail: Tail<T>) -> Self {
        Seq { prefix, tail }
    }

    pub fn at(&self, i: u64) -> T {
        let len = self.prefix.len() as u64;
        if i < len {
            return self.prefix[i as usize].clone();
        }
        match &self.tail {
            Tail::Const(c) => c.clone(),
            Tail::Periodic(word) => word[((i - len) % word.len() as u64) as usize].clone(),
            Tail::Ramp => T::from_index(i),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Tail::Periodic(w) = &self.tail {
            if w.is_empty() {
                return Err(Error::Parse("periodic tail needs a nonempty word".into()));
            }
        }
        Ok(())
    }

    pub fn tail_start(&self) -> u64 {
        self.prefix.len() as u64
    }

    /// Values the tail takes, or `None` for a ramp.
    fn tail_values(&self) -> Option<&[T]> {
        match &self.tail {
            Tail::Const(c) => Some(std::slice::from_ref(c)),
            Tail::Periodic(w) => Some(w),
            Tail::Ramp => None,
        }
    }

    /// Length of one tail period (1 for const and ramp).
    pub fn period_len(&self) -> u64 {
        match &self.tail {
            Tail::Periodic(w) => w.len() as u64,
            _ => 1,
        }
    }

    /// Least index `i >= from` with `pred(x(i))`. On a ramp tail the search
    /// runs until `pred` holds, so `pred` must eventually accept large values
    /// or the tail must settle the answer within the first period.
    pub fn first_index_from(&self, from: u64, pred: impl Fn(&T) -> bool) -> Option<u64> {
        let len = self.tail_start();
        for i in from..len {
            if pred(&self.prefix[i as usize]) {
                return Some(i);
            }
        }
        let start = from.max(len);
        match self.tail {
            Tail::Ramp => (start..start.saturating_add(1 << 20)).find(|&i| pred(&T::from_index(i))),
            _ => (start..start + self.period_len()).find(|&i| pred(&self.at(i))),
        }
    }

    /// Whether `pred` holds at every index `>= from`. A ramp tail takes
    /// infinitely many values, so callers' predicates (which accept finitely
    /// many values) always fail on it.
    pub fn all_from(&self, from: u64, pred: impl Fn(&T) -> bool) -> bool {
        let len = self.tail_start();
        if !(from..len).all(|i| pred(&self.prefix[i as usize])) {
            return false;
        }
        if self.tail_values().is_none() {
            return false;
        }
        let start = from.max(len);
        (start..start + self.period_len()).all(|i| pred(&self.at(i)))
    }
}

impl SeqInstance {
    /// `0^p 1 0^∞`.
    pub fn spike(p: usize) -> Self {
        Self::spike_value(p, 1)
    }

    pub fn spike_value(p: usize, v: u64) -> Self {
        let mut prefix = vec![0; p];
        prefix.push(v);
        Seq::new(prefix, Tail::Const(0))
    }

    pub fn zeros() -> Self {
        Seq::new(vec![], Tail::Const(0))
    }

    pub fn is_all_zero(&self) -> bool {
        self.all_from(0, |v| *v == 0)
    }

    pub fn first_nonzero(&self) -> Option<u64> {
        self.first_nonzero_from(0)
    }

    pub fn first_nonzero_from(&self, from: u64) -> Option<u64> {
        self.first_index_from(from, |v| *v != 0)
    }

    /// Least `n` with `x(m) = 0` for all `m >= n`.
    pub fn least_zero_tail(&self) -> Option<u64> {
        if !matches!(self.tail, Tail::Const(0)) {
            return match &self.tail {
                Tail::Periodic(w) if w.iter().all(|v| *v == 0) => Some(self.zero_run_start()),
                _ => None,
            };
        }
        Some(self.zero_run_start())
    }

    fn zero_run_start(&self) -> u64 {
        self.prefix
            .iter()
            .rposition(|v| *v != 0)
            .map_or(0, |i| i as u64 + 1)
    }

    /// Least `s` with `x(t) = x(s)` for all `t >= s`.
    pub fn convergence_point(&self) -> Option<u64> {
        let c = match &self.tail {
            Tail::Const(c) => *c,
            Tail::Periodic(w) if w.iter().all(|v| *v == w[0]) => w[0],
            _ => return None,
        };
        Some(
            self.prefix
                .iter()
                .rposition(|v| *v != c)
                .map_or(0, |i| i as u64 + 1),
        )
    }

    pub fn max_value(&self) -> Option<u64> {
        let tail_max = self.tail_values()?.iter().copied().max()?;
        Some(self.prefix.iter().copied().max().unwrap_or(0).max(tail_max))
    }

    /// Positions `s` with `x(s) > max_{t<s} x(t)` (position 0 always counts).
    /// Returns the records and whether there are only finitely many.
    pub fn records(&self) -> (Vec<u64>, bool) {
        let mut out = Vec::new();
        let mut best: Option<u64> = None;
        let mut push = |i: u64, v: u64, out: &mut Vec<u64>| {
            if best.is_none_or(|b| v > b) {
                best = Some(v);
                out.push(i);
            }
        };
        for (i, &v) in self.prefix.iter().enumerate() {
            push(i as u64, v, &mut out);
        }
        let len = self.tail_start();
        match &self.tail {
            Tail::Ramp => {
                // lists the records up to the first one in the tail; all
                // later positions are records too
                let mut i = len;
                while out.last().is_none_or(|&r| r < len) {
                    push(i, i, &mut out);
                    i += 1;
                }
                (out, false)
            }
            _ => {
                for i in len..len + self.period_len() {
                    push(i, self.at(i), &mut out);
                }
                (out, true)
            }
        }
    }

    /// Whether `i` is a record position.
    pub fn is_record(&self, i: u64) -> bool {
        let v = self.at(i);
        (0..i).all(|t| self.at(t) < v)
    }

    pub fn universe(&self) -> u64 {
        let vals = self.tail_values().map(|w| w.iter().copied().max().unwrap_or(0)).unwrap_or(0);
        let pre = self.prefix.iter().copied().max().unwrap_or(0);
        pre.max(vals).max(self.prefix.len() as u64)
    }
}

/// Exact rational with `p/q` text form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Q(pub BigRational);

impl Q {
    pub fn int(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl FromIndex for Q {
    fn from_index(n: u64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({})", self.0)
    }
}

impl From<Q> for String {
    fn from(q: Q) -> String {
        q.to_string()
    }
}

impl TryFrom<String> for Q {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Q {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("rational `{s}`"));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.trim().parse().map_err(|_| bad())?),
        };
        Ok(Q(r))
    }
}

impl Seq<Q> {
    /// Supremum of `|x(n)|` if bounded.
    pub fn abs_sup(&self) -> Option<BigRational> {
        let tail: &[Q] = self.tail_values()?;
        self.prefix
            .iter()
            .chain(tail)
            .map(|q| q.0.abs())
            .max()
            .or_else(|| Some(BigRational::zero()))
    }

    pub fn universe(&self) -> u64 {
        let mag = |q: &Q| -> u64 {
            let n = q.0.numer().abs().try_into().unwrap_or(u64::MAX);
            let d = q.0.denom().try_into().unwrap_or(u64::MAX);
            n.max(d)
        };
        let tail = match &self.tail {
            Tail::Const(c) => mag(c),
            Tail::Periodic(w) => w.iter().map(mag).max().unwrap_or(0),
            Tail::Ramp => 0,
        };
        self.prefix.iter().map(mag).max().unwrap_or(0).max(tail).max(self.prefix.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(prefix: &[u64], tail: Tail<u64>) -> SeqInstance {
        Seq::new(prefix.to_vec(), tail)
    }

    #[test]
    fn reads_prefix_and_tails() {
        assert_eq!(s(&[3, 3, 5], Tail::Const(5)).at(1), 3);
        assert_eq!(s(&[], Tail::Ramp).at(7), 7);
        assert_eq!(s(&[1], Tail::Const(0)).at(9), 0);
        assert_eq!(s(&[9], Tail::Periodic(vec![0, 1])).at(4), 1);
    }

    #[test]
    fn zero_tail_and_convergence() {
        assert_eq!(s(&[1], Tail::Const(0)).least_zero_tail(), Some(1));
        assert_eq!(s(&[], Tail::Ramp).least_zero_tail(), None);
        assert_eq!(s(&[3, 3, 5], Tail::Const(5)).convergence_point(), Some(2));
        assert_eq!(s(&[], Tail::Periodic(vec![0, 1])).convergence_point(), None);
        assert_eq!(s(&[4, 0], Tail::Periodic(vec![0, 0])).least_zero_tail(), Some(1));
    }

    #[test]
    fn records_of_bounded_and_ramp() {
        assert_eq!(s(&[2], Tail::Const(1)).records(), (vec![0], true));
        assert_eq!(s(&[0, 0, 3], Tail::Const(0)).records(), (vec![0, 2], true));
        assert!(!s(&[], Tail::Ramp).records().1);
    }

    #[test]
    fn first_nonzero_on_ramp() {
        assert_eq!(s(&[0, 0], Tail::Ramp).first_nonzero(), Some(2));
        assert_eq!(s(&[], Tail::Ramp).first_nonzero(), Some(1));
        assert_eq!(SeqInstance::spike(3).first_nonzero(), Some(3));
    }

    #[test]
    fn rational_text_form() {
        let q: Q = "-6/4".parse().unwrap();
        assert_eq!(q, Q::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert!("1/0".parse::<Q>().is_err());
    }
}
