//! Binary trees made of the spine `0^∞` and branches `0^n 1^s`.

use super::family::Cuts;
use crate::coding::Bits;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Contains `0^m` for all `m`, and `0^n 1^s` (`s >= 1`) iff `s <= cut(n)`;
/// an uncut branch is the infinite path `0^n 1^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeInstance {
    pub branches: Cuts,
}

impl TreeInstance {
    pub fn contains(&self, sigma: &Bits) -> Result<bool> {
        Ok(match sigma.as_branch() {
            None => false,
            Some((_, 0)) => true,
            Some((n, s)) => self.branches.cut(n as u64)?.is_none_or(|c| s as u64 <= c),
        })
    }

    /// Whether `sigma` lies on an infinite path.
    pub fn is_extendible(&self, sigma: &Bits) -> Result<bool> {
        Ok(match sigma.as_branch() {
            None => false,
            Some((_, 0)) => true,
            Some((n, _)) => self.branches.is_uncut(n as u64)?,
        })
    }

    /// At least two infinite paths: the spine and one uncut branch.
    pub fn has_two_paths(&self) -> Result<bool> {
        Ok(self.branches.least_uncut()?.is_some())
    }

    /// Extendible nodes of length at most `bound`.
    pub fn extendible_upto(&self, bound: usize) -> Result<Vec<Bits>> {
        let mut out: Vec<Bits> = (0..=bound).map(Bits::zeros).collect();
        for n in 0..bound {
            if self.branches.is_uncut(n as u64)? {
                out.extend((1..=bound - n).map(|s| Bits::branch(n, s)));
            }
        }
        Ok(out)
    }

    pub fn universe(&self) -> u64 {
        self.branches.universe()
    }
}
