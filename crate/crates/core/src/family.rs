//! Uniformly Π⁰₁ families `(A_n)` and their refutation watchers.
//!
//! Every family is given twice: as a per-stage check that reads a few stream
//! positions (`check`), and as an oracle on descriptions that computes the
//! least refuting stage exactly (`refutation_stage`). The watcher reports
//! the least stage `s <= t` at which the check fires.

use crate::error::{Error, Result};
use crate::instance::{Instance, Variant};
use crate::stream::StreamHandle;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A decidable `f(m, x) in {0,1}` reading finitely many positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryMatrix {
    /// `f(m,x) = [x(m) = 0]`
    ZeroAt,
    /// `f(m,x) = [x(m+1) = x(m)]`
    SteadyAt,
}

/// A decidable `theta(n, m, x)`; the Σ⁰₂ set is `exists n forall m theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matrix {
    /// `m < n or x(m) = 0`
    EventuallyZero,
    /// `x(m) <= n`
    BoundedBy,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `A_n = {x : x(m) = 0 for all m >= n}`; increasing.
    FinThreshold,
    /// `A_n = {x : f(m,x) = 1 for all m >= n, and f(n-1,x) = 0}` with the
    /// second conjunct dropped at `n = 0`; pairwise disjoint.
    Normalized(BinaryMatrix),
    /// `A_k = {x : x(n) < k for all n}`; increasing.
    BoundedBelow,
    /// `A_n = {x : x(m) = n for all m}`; pairwise disjoint but not
    /// increasing.
    ConstantValue,
    /// `A_a = {P : a is the greatest element of P}`; pairwise disjoint.
    GreatestElement,
    /// `A_n = {(x_k) : x_n = 0^∞}`.
    TruthColumn,
    /// `A_n = {x : theta(n,m,x) for all m}`; increasing for both matrices.
    Matrix(Matrix),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FinThreshold => f.write_str("fin_threshold"),
            Family::Normalized(BinaryMatrix::ZeroAt) => f.write_str("normalized_zero"),
            Family::Normalized(BinaryMatrix::SteadyAt) => f.write_str("normalized_steady"),
            Family::BoundedBelow => f.write_str("bounded_below"),
            Family::ConstantValue => f.write_str("constant_value"),
            Family::GreatestElement => f.write_str("greatest_element"),
            Family::TruthColumn => f.write_str("truth_column"),
            Family::Matrix(Matrix::EventuallyZero) => f.write_str("matrix_eventually_zero"),
            Family::Matrix(Matrix::BoundedBy) => f.write_str("matrix_bounded_by"),
        }
    }
}

impl Matrix {
    pub fn eval(self, n: u64, m: u64, x: &StreamHandle) -> Result<bool> {
        match self {
            Matrix::EventuallyZero => Ok(m < n || x.nat(m)? == 0),
            Matrix::BoundedBy => Ok(x.nat(m)? <= n),
        }
    }
}

impl BinaryMatrix {
    pub fn eval(self, m: u64, x: &StreamHandle) -> Result<bool> {
        match self {
            BinaryMatrix::ZeroAt => Ok(x.nat(m)? == 0),
            BinaryMatrix::SteadyAt => Ok(x.nat(m + 1)? == x.nat(m)?),
        }
    }
}

impl Family {
    pub fn variant(&self) -> Variant {
        match self {
            Family::GreatestElement => Variant::Poset,
            Family::TruthColumn => Variant::Family,
            _ => Variant::Seq,
        }
    }

    pub fn is_disjoint(&self) -> bool {
        matches!(
            self,
            Family::Normalized(_) | Family::ConstantValue | Family::GreatestElement
        )
    }

    pub fn is_increasing(&self) -> bool {
        matches!(self, Family::FinThreshold | Family::BoundedBelow | Family::Matrix(_))
    }

    /// Whether stage `s` refutes `x in A_n`.
    pub fn check(&self, n: u64, x: &StreamHandle, s: u64) -> Result<bool> {
        use crate::coding::pair;
        match self {
            Family::FinThreshold => Ok(s >= n && x.nat(s)? != 0),
            Family::Normalized(f) => {
                if n >= 1 && s == n - 1 && f.eval(n - 1, x)? {
                    return Ok(true);
                }
                Ok(s >= n && !f.eval(s, x)?)
            }
            Family::BoundedBelow => Ok(x.nat(s)? >= n),
            Family::ConstantValue => Ok(x.nat(s)? != n),
            Family::GreatestElement => {
                let a_in = x.flag(pair(n, n))?;
                if !a_in {
                    return Ok(s == 0);
                }
                Ok(x.flag(pair(s, s))? && !x.flag(pair(s, n))?)
            }
            Family::TruthColumn => Ok(x.nat(pair(n, s))? != 0),
            Family::Matrix(m) => Ok(!m.eval(n, s, x)?),
        }
    }

    /// The watcher for `A_n` run to stage `t`: the least refuting stage
    /// `s <= t`, if any.
    pub fn watch(&self, n: u64, x: &StreamHandle, t: u64) -> Result<Option<u64>> {
        for s in 0..=t {
            if self.check(n, x, s)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// The least stage at which the watcher for `A_n` refutes on the stream
    /// of `d`, computed from the description.
    pub fn refutation_stage(&self, n: u64, d: &Instance) -> Result<Option<u64>> {
        self.expect_variant(d)?;
        match (self, d) {
            (Family::FinThreshold | Family::Matrix(Matrix::EventuallyZero), Instance::Seq(x)) => {
                Ok(x.first_nonzero_from(n))
            }
            (Family::Normalized(f), Instance::Seq(x)) => {
                let f_at = |m: u64| match f {
                    BinaryMatrix::ZeroAt => x.at(m) == 0,
                    BinaryMatrix::SteadyAt => x.at(m + 1) == x.at(m),
                };
                if n >= 1 && f_at(n - 1) {
                    return Ok(Some(n - 1));
                }
                Ok(match f {
                    BinaryMatrix::ZeroAt => x.first_nonzero_from(n),
                    BinaryMatrix::SteadyAt => {
                        let end = n.max(x.tail_start()) + x.period_len() + 1;
                        (n..end).find(|&m| !f_at(m))
                    }
                })
            }
            (Family::BoundedBelow, Instance::Seq(x)) => Ok(x.first_index_from(0, |v| *v >= n)),
            (Family::Matrix(Matrix::BoundedBy), Instance::Seq(x)) => Ok(x.first_index_from(0, |v| *v > n)),
            (Family::ConstantValue, Instance::Seq(x)) => Ok(x.first_index_from(0, |v| *v != n)),
            (Family::GreatestElement, Instance::Poset(p)) => {
                if !p.contains(n) {
                    return Ok(Some(0));
                }
                Ok(p.least_not_below(n))
            }
            (Family::TruthColumn, Instance::Family(f)) => f.cuts().cut(n),
            _ => unreachable!("variant checked above"),
        }
    }

    pub fn holds(&self, n: u64, d: &Instance) -> Result<bool> {
        Ok(self.refutation_stage(n, d)?.is_none())
    }

    /// The least `n` with `d in A_n`.
    pub fn least_member(&self, d: &Instance) -> Result<Option<u64>> {
        self.next_member(d, 0)
    }

    /// The least `n >= from` with `d in A_n`.
    pub fn next_member(&self, d: &Instance, from: u64) -> Result<Option<u64>> {
        self.expect_variant(d)?;
        if let (Family::TruthColumn, Instance::Family(f)) = (self, d) {
            return f.cuts().next_uncut(from);
        }
        let least = match (self, d) {
            (Family::FinThreshold | Family::Matrix(Matrix::EventuallyZero), Instance::Seq(x)) => x.least_zero_tail(),
            (Family::Normalized(BinaryMatrix::ZeroAt), Instance::Seq(x)) => x.least_zero_tail(),
            (Family::Normalized(BinaryMatrix::SteadyAt), Instance::Seq(x)) => x.convergence_point(),
            (Family::BoundedBelow, Instance::Seq(x)) => x.max_value().map(|m| m + 1),
            (Family::Matrix(Matrix::BoundedBy), Instance::Seq(x)) => x.max_value(),
            (Family::ConstantValue, Instance::Seq(x)) => (x.convergence_point() == Some(0)).then(|| x.at(0)),
            (Family::GreatestElement, Instance::Poset(p)) => p.top(),
            _ => unreachable!("variant checked above"),
        };
        Ok(if self.is_increasing() {
            least.map(|m| m.max(from))
        } else {
            least.filter(|&m| m >= from)
        })
    }

    fn expect_variant(&self, d: &Instance) -> Result<()> {
        if d.variant() == self.variant() {
            Ok(())
        } else {
            Err(Error::mismatch(self.variant().to_string(), d.variant().to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{PosetInstance, Tail};

    fn watch_on(f: &Family, n: u64, d: &Instance, t: u64) -> Option<u64> {
        f.watch(n, &StreamHandle::of(d, 10_000), t).unwrap()
    }

    #[test]
    fn all_zero_watcher() {
        let w = Family::FinThreshold;
        assert_eq!(watch_on(&w, 0, &Instance::seq(vec![1], Tail::Const(0)), 0), Some(0));
        for t in [0, 5, 40] {
            assert_eq!(watch_on(&w, 0, &Instance::seq(vec![0, 0], Tail::Const(0)), t), None);
        }
    }

    #[test]
    fn bounded_watcher_on_ramp() {
        // "bounded by 2" is x(n) <= 2, i.e. piece 3 of x(n) < k
        let ramp = Instance::seq(vec![], Tail::Ramp);
        assert_eq!(watch_on(&Family::BoundedBelow, 3, &ramp, 3), Some(3));
        assert_eq!(watch_on(&Family::Matrix(Matrix::BoundedBy), 2, &ramp, 3), Some(3));
        assert_eq!(watch_on(&Family::BoundedBelow, 3, &ramp, 2), None);
    }

    #[test]
    fn union_membership_examples() {
        let x = Instance::seq(vec![1], Tail::Const(0));
        assert!(Family::FinThreshold.holds(1, &x).unwrap());
        assert!(!Family::FinThreshold.holds(0, &x).unwrap());
        let y = Instance::seq(vec![2], Tail::Const(1));
        assert!(Family::BoundedBelow.holds(3, &y).unwrap());
        assert_eq!(Family::BoundedBelow.least_member(&y).unwrap(), Some(3));
    }

    #[test]
    fn normalized_pieces_pick_the_least_witness() {
        let f = Family::Normalized(BinaryMatrix::ZeroAt);
        let x = Instance::seq(vec![1], Tail::Const(0));
        assert_eq!(f.least_member(&x).unwrap(), Some(1));
        assert!(!f.holds(5, &x).unwrap());
        assert!(f.holds(0, &Instance::seq(vec![], Tail::Const(0))).unwrap());
    }

    #[test]
    fn watcher_matches_oracle() {
        let instances = [
            Instance::seq(vec![3, 3, 5], Tail::Const(5)),
            Instance::seq(vec![0, 2], Tail::Periodic(vec![1, 0])),
            Instance::seq(vec![1, 0, 0, 4], Tail::Const(0)),
            Instance::seq(vec![], Tail::Ramp),
        ];
        let families = [
            Family::FinThreshold,
            Family::Normalized(BinaryMatrix::ZeroAt),
            Family::Normalized(BinaryMatrix::SteadyAt),
            Family::BoundedBelow,
            Family::ConstantValue,
            Family::Matrix(Matrix::EventuallyZero),
            Family::Matrix(Matrix::BoundedBy),
        ];
        for d in &instances {
            for f in &families {
                for n in 0..8 {
                    let oracle = f.refutation_stage(n, d).unwrap();
                    assert_eq!(watch_on(f, n, d, 64), oracle.filter(|&s| s <= 64), "{f} {n} {d:?}");
                }
            }
        }
        let p = Instance::Poset(PosetInstance::finite([3, 5, 7], vec![(3, 5)]));
        for a in 0..9 {
            let oracle = Family::GreatestElement.refutation_stage(a, &p).unwrap();
            assert_eq!(watch_on(&Family::GreatestElement, a, &p, 20), oracle);
        }
    }
}
