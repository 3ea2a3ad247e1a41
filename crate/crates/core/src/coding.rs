//! Coding of finite data as naturals: Cantor pairing, signed integers,
//! finite lists, binary strings, and the dyadic enumeration used to fill
//! dense intervals.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Cantor pairing `<a,b> = (a+b)(a+b+1)/2 + b`.
///
/// Panics if the code does not fit in a `u64`.
pub fn pair(a: u64, b: u64) -> u64 {
    try_pair(a, b).expect("pairing overflow")
}

pub fn try_pair(a: u64, b: u64) -> Option<u64> {
    let s = (a as u128) + (b as u128);
    let code = s * (s + 1) / 2 + b as u128;
    u64::try_from(code).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let b = z - t;
    let a = w - b;
    (a as u64, b as u64)
}

/// `<a,b,c> = <a,<b,c>>`.
pub fn triple(a: u64, b: u64, c: u64) -> u64 {
    pair(a, pair(b, c))
}

pub fn untriple(z: u64) -> (u64, u64, u64) {
    let (a, r) = unpair(z);
    let (b, c) = unpair(r);
    (a, b, c)
}

pub fn zigzag(k: i64) -> u64 {
    ((k << 1) ^ (k >> 63)) as u64
}

pub fn unzigzag(z: u64) -> i64 {
    ((z >> 1) as i64) ^ -((z & 1) as i64)
}

/// List coding: `[] = 0`, `l :: rest = 1 + <l, code(rest)>`.
pub fn encode_list(items: &[u64]) -> Option<u64> {
    items
        .iter()
        .rev()
        .try_fold(0u64, |acc, &l| try_pair(l, acc)?.checked_add(1))
}

pub fn decode_list(mut code: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while code > 0 {
        let (l, rest) = unpair(code - 1);
        out.push(l);
        code = rest;
    }
    out
}

/// A finite binary string, the node type of binary trees.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    /// `0^n 1^s`.
    pub fn branch(n: usize, s: usize) -> Self {
        let mut v = vec![false; n];
        v.extend(std::iter::repeat_n(true, s));
        Bits(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Bits) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Decomposes `0^n 1^s`; `None` for any other shape.
    pub fn as_branch(&self) -> Option<(usize, usize)> {
        let n = self.0.iter().take_while(|b| !**b).count();
        let s = self.0.len() - n;
        self.0[n..].iter().all(|b| *b).then_some((n, s))
    }

    /// Bijective code: the binary numeral `1σ` minus one.
    pub fn code(&self) -> Option<u64> {
        if self.0.len() >= 64 {
            return None;
        }
        let mut v: u64 = 1;
        for &b in &self.0 {
            v = (v << 1) | b as u64;
        }
        Some(v - 1)
    }

    pub fn from_code(code: u64) -> Self {
        let v = code as u128 + 1;
        let width = 127 - v.leading_zeros() as usize;
        Bits((0..width).rev().map(|i| (v >> i) & 1 == 1).collect())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl From<Bits> for String {
    fn from(b: Bits) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for Bits {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

/// The `j`-th dyadic rational of `(0,1)` in the order
/// 1/2, 1/4, 3/4, 1/8, 3/8, ... as `(numerator, exponent)`.
pub fn dyadic(j: u64) -> (u64, u32) {
    let v = j + 1;
    let level = 63 - v.leading_zeros();
    let idx = v - (1u64 << level);
    (2 * idx + 1, level + 1)
}

/// Compares `a/2^p` with `b/2^q`.
pub fn cmp_dyadic(a: (u64, u32), b: (u64, u32)) -> std::cmp::Ordering {
    let (an, ap) = a;
    let (bn, bp) = b;
    let e = ap.max(bp);
    let lhs = (an as u128) << (e - ap);
    let rhs = (bn as u128) << (e - bp);
    lhs.cmp(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairing_small_values() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 0), 1);
        assert_eq!(pair(0, 1), 2);
        assert_eq!(pair(2, 0), 3);
        assert_eq!(unpair(4), (1, 1));
    }

    #[test]
    fn bit_codes_enumerate_by_length() {
        let strs: Vec<String> = (0..7).map(|c| Bits::from_code(c).to_string()).collect();
        assert_eq!(strs, ["", "0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn branch_shape() {
        assert_eq!(Bits::branch(2, 3).as_branch(), Some((2, 3)));
        assert_eq!(Bits::try_from("010".to_string()).unwrap().as_branch(), None);
    }

    #[test]
    fn dyadic_order() {
        assert_eq!(dyadic(0), (1, 1));
        assert_eq!(dyadic(1), (1, 2));
        assert_eq!(dyadic(2), (3, 2));
        assert_eq!(dyadic(3), (1, 3));
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(a in 0u64..1 << 30, b in 0u64..1 << 30) {
            prop_assert_eq!(unpair(pair(a, b)), (a, b));
        }

        #[test]
        fn list_code_roundtrip(items in proptest::collection::vec(0u64..40, 0..5)) {
            match encode_list(&items) {
                Some(code) => prop_assert_eq!(decode_list(code), items),
                None => prop_assert!(items.len() >= 4),
            }
        }

        #[test]
        fn zigzag_roundtrip(k in -1_000_000i64..1_000_000) {
            prop_assert_eq!(unzigzag(zigzag(k)), k);
        }

        #[test]
        fn bits_code_roundtrip(code in 0u64..1 << 20) {
            prop_assert_eq!(Bits::from_code(code).code(), Some(code));
        }

        #[test]
        fn dyadics_are_distinct_and_in_unit_interval(i in 0u64..5000, j in 0u64..5000) {
            let (n, e) = dyadic(i);
            prop_assert!(n < (1u64 << e));
            if i != j {
                prop_assert_ne!(cmp_dyadic(dyadic(i), dyadic(j)), std::cmp::Ordering::Equal);
            }
        }
    }
}
