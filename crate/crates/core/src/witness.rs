//! Finite witness tokens.
//!
//! Tokens print as bracketed tuples: `5`, `[1,3]`, `-3/4` (numerator over
//! denominator, not reduced), `b:0101` for binary strings.

use crate::coding::Bits;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Witness {
    Nat(u64),
    /// `num/den` with `den >= 1`; reducible fractions are distinct tokens.
    Frac { den: BigUint, num: BigInt },
    Bits(Bits),
    Tuple(Vec<Witness>),
}

impl Witness {
    pub fn pair(a: u64, b: u64) -> Self {
        Witness::Tuple(vec![Witness::Nat(a), Witness::Nat(b)])
    }

    pub fn frac(den: impl Into<BigUint>, num: impl Into<BigInt>) -> Self {
        Witness::Frac {
            den: den.into(),
            num: num.into(),
        }
    }

    pub fn tuple2(a: Witness, b: Witness) -> Self {
        Witness::Tuple(vec![a, b])
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Witness::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(u64, u64)> {
        match self {
            Witness::Tuple(items) if items.len() == 2 => Some((items[0].as_nat()?, items[1].as_nat()?)),
            _ => None,
        }
    }

    pub fn as_tuple2(&self) -> Option<(&Witness, &Witness)> {
        match self {
            Witness::Tuple(items) if items.len() == 2 => Some((&items[0], &items[1])),
            _ => None,
        }
    }

    /// The rational value of a fraction token; `None` for a zero denominator.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Witness::Frac { den, num } if !den.is_zero() => {
                Some(BigRational::new(num.clone(), BigInt::from(den.clone())))
            }
            _ => None,
        }
    }

    pub fn as_bits_pair(&self) -> Option<(&Bits, &Bits)> {
        match self.as_tuple2()? {
            (Witness::Bits(a), Witness::Bits(b)) => Some((a, b)),
            _ => None,
        }
    }

    pub(crate) fn expect_nat(&self, schema: &str) -> Result<u64> {
        self.as_nat().ok_or_else(|| self.schema_error(schema))
    }

    pub(crate) fn expect_pair(&self, schema: &str) -> Result<(u64, u64)> {
        self.as_pair().ok_or_else(|| self.schema_error(schema))
    }

    pub(crate) fn expect_rational(&self, schema: &str) -> Result<BigRational> {
        self.as_rational().ok_or_else(|| self.schema_error(schema))
    }

    pub(crate) fn schema_error(&self, schema: &str) -> Error {
        Error::SchemaMismatch {
            schema: schema.to_string(),
            witness: self.to_string(),
        }
    }

    /// Largest natural component, used to compare against enumeration bounds.
    pub fn magnitude(&self) -> BigUint {
        match self {
            Witness::Nat(n) => BigUint::from(*n),
            Witness::Frac { den, num } => den.clone().max(num.abs().to_biguint().unwrap_or_default()),
            Witness::Bits(b) => BigUint::from(b.len()),
            Witness::Tuple(items) => items.iter().map(Witness::magnitude).max().unwrap_or_default(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Nat(n) => write!(f, "{n}"),
            Witness::Frac { den, num } => write!(f, "{num}/{den}"),
            Witness::Bits(b) => write!(f, "b:{b}"),
            Witness::Tuple(items) => {
                f.write_str("[")?;
                for (i, w) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Witness> for String {
    fn from(w: Witness) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Witness {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let w = p.token()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "witness `{}`: {msg} at byte {}",
            String::from_utf8_lossy(self.src),
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn token(&mut self) -> Result<Witness> {
        self.skip_ws();
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Witness::Tuple(items));
                }
                loop {
                    items.push(self.token()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Witness::Tuple(items));
                        }
                        _ => return Err(self.error("expected `,` or `]`")),
                    }
                }
            }
            Some(b'b') => {
                self.pos += 1;
                if self.peek() != Some(b':') {
                    return Err(self.error("expected `:` after `b`"));
                }
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(b'0' | b'1')) {
                    self.pos += 1;
                }
                let bits = self.src[start..self.pos].iter().map(|&c| c == b'1').collect();
                Ok(Witness::Bits(Bits(bits)))
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    let den = den
                        .to_biguint()
                        .filter(|d| !d.is_zero())
                        .ok_or_else(|| self.error("denominator must be positive"))?;
                    Ok(Witness::Frac { den, num })
                } else {
                    let n = u64::try_from(num).map_err(|_| self.error("natural out of range"))?;
                    Ok(Witness::Nat(n))
                }
            }
            _ => Err(self.error("expected a witness token")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<BigInt>().ok())
            .ok_or_else(|| self.error("expected an integer"))
    }
}
