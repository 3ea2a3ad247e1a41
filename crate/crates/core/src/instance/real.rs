//! Pre-reals: rational sequences `(q_j)` with `|q_j - q_m| <= 2^-j` for `m >= j`.

use super::seq::{Q, Seq, SeqInstance};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// How approximations deviate from the exact value: `q_j = x + delta_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxRule {
    #[default]
    Exact,
    /// `delta_j = -2^-(j+1)`
    Below,
    /// `delta_j = +2^-(j+1)`
    Above,
    /// `delta_j = (-1)^j 2^-(j+1)`
    Alternating,
}

pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e as usize
}

/// `2^-e`.
pub fn inv_pow2(e: u64) -> BigRational {
    BigRational::new(BigInt::one(), pow2(e))
}

impl ApproxRule {
    pub fn delta(self, j: u64) -> BigRational {
        let step = inv_pow2(j + 1);
        match self {
            ApproxRule::Exact => BigRational::zero(),
            ApproxRule::Below => -step,
            ApproxRule::Above => step,
            ApproxRule::Alternating if j % 2 == 0 => step,
            ApproxRule::Alternating => -step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealTarget {
    Rational(Q),
    /// `sum over {n : x(n) != 0} of 2^-(n^2)`; rational iff the support is finite.
    SquareDyadicSum(SeqInstance),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreRealInstance {
    pub target: RealTarget,
    #[serde(default)]
    pub approx: ApproxRule,
}

/// Least `k` with `(k+1)^2 >= j+1`: partial sums through index `k` are
/// within `2^-j` of every later partial sum.
pub fn square_sum_cutoff(j: u64) -> u64 {
    let r = (j + 1).sqrt();
    if r * r == j + 1 {
        r - 1
    } else {
        r
    }
}

/// `sum over {n <= upto : support(n)} of 2^-(n^2)`.
pub fn square_dyadic_partial(support: impl Fn(u64) -> bool, upto: u64) -> BigRational {
    let den = pow2(upto * upto);
    let num = (0..=upto)
        .filter(|&n| support(n))
        .fold(BigInt::zero(), |acc, n| acc + pow2(upto * upto - n * n));
    BigRational::new(num, den)
}

impl PreRealInstance {
    pub fn rational(q: Q, approx: ApproxRule) -> Self {
        PreRealInstance {
            target: RealTarget::Rational(q),
            approx,
        }
    }

    /// The `j`-th approximation.
    pub fn approx_at(&self, j: u64) -> BigRational {
        match &self.target {
            RealTarget::Rational(q) => &q.0 + self.approx.delta(j),
            RealTarget::SquareDyadicSum(x) => square_dyadic_partial(|n| x.at(n) != 0, square_sum_cutoff(j)),
        }
    }

    /// The limit if it is rational.
    pub fn exact_value(&self) -> Option<BigRational> {
        match &self.target {
            RealTarget::Rational(q) => Some(q.0.clone()),
            RealTarget::SquareDyadicSum(x) => {
                let last = x.least_zero_tail()?;
                Some(match last {
                    0 => BigRational::zero(),
                    l => square_dyadic_partial(|n| x.at(n) != 0, l - 1),
                })
            }
        }
    }

    pub fn universe(&self) -> u64 {
        match &self.target {
            RealTarget::Rational(q) => {
                let n: u64 = q.0.numer().abs().try_into().unwrap_or(u64::MAX);
                let d: u64 = q.0.denom().try_into().unwrap_or(u64::MAX);
                n.max(d)
            }
            RealTarget::SquareDyadicSum(x) => x.universe(),
        }
    }
}

/// A sequence of pre-reals: `x_n` is exact, its `j`-th approximation is
/// `x_n + delta_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealSeqInstance {
    pub values: Seq<Q>,
    #[serde(default)]
    pub approx: ApproxRule,
}

impl RealSeqInstance {
    pub fn approx_at(&self, n: u64, j: u64) -> BigRational {
        self.values.at(n).0 + self.approx.delta(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::seq::Tail;

    #[test]
    fn cutoff_matches_definition() {
        for j in 0..200u64 {
            let k = square_sum_cutoff(j);
            assert!((k + 1) * (k + 1) >= j + 1);
            assert!(k == 0 || k * k < j + 1);
        }
    }

    #[test]
    fn square_sum_approximations_are_cauchy() {
        let x = PreRealInstance {
            target: RealTarget::SquareDyadicSum(Seq::new(vec![], Tail::Const(1))),
            approx: ApproxRule::Exact,
        };
        for j in 0..40u64 {
            for m in j..40 {
                let d = (x.approx_at(j) - x.approx_at(m)).abs();
                assert!(d <= inv_pow2(j), "j={j} m={m}");
            }
        }
        assert_eq!(x.exact_value(), None);
    }

    #[test]
    fn rational_rules_are_cauchy() {
        for rule in [ApproxRule::Below, ApproxRule::Above, ApproxRule::Alternating] {
            let x = PreRealInstance::rational(Q::new(1, 3), rule);
            for j in 0..20u64 {
                for m in j..20 {
                    assert!((x.approx_at(j) - x.approx_at(m)).abs() <= inv_pow2(j));
                }
            }
        }
    }

    #[test]
    fn finite_support_value() {
        let x = PreRealInstance {
            target: RealTarget::SquareDyadicSum(Seq::new(vec![1, 1], Tail::Const(0))),
            approx: ApproxRule::Exact,
        };
        assert_eq!(x.exact_value(), Some(BigRational::new(3.into(), 2.into())));
    }
}
