//! Continuity attacks: run a tracker on a base instance, then look for an
//! extension that agrees on everything the tracker read but on which its
//! answer is wrong.

use crate::error::Result;
use crate::instance::{Instance, PosetInstance, SeqInstance};
use crate::reduction::Reduction;
use crate::stream::{default_budget, StreamHandle};
use crate::verify::{verify, VerifyConfig};
use crate::witness::Witness;
use serde::{Deserialize, Serialize};

/// A base instance and extensions that agree with it below `fork`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryFamily {
    pub base: Instance,
    pub fork: u64,
    pub extensions: Vec<Instance>,
}

impl AdversaryFamily {
    /// Base `0^∞`; extensions `0^p v 0^∞` for `fork <= p < fork + count`
    /// and `1 <= v <= max_value`, ordered by `p` then `v`.
    pub fn late_spike(fork: u64, count: u64, max_value: u64) -> Self {
        let extensions = (fork..fork + count)
            .flat_map(|p| (1..=max_value).map(move |v| Instance::Seq(SeqInstance::spike_value(p as usize, v))))
            .collect();
        AdversaryFamily {
            base: Instance::Seq(SeqInstance::zeros()),
            fork,
            extensions,
        }
    }

    /// The same family read as record chains: a single element, or a late
    /// second record on top of it.
    pub fn late_record(fork: u64, count: u64, max_value: u64) -> Self {
        let chain = |d: Instance| match d {
            Instance::Seq(seq) => Instance::Poset(PosetInstance::RecordChain { seq }),
            other => other,
        };
        let f = Self::late_spike(fork, count, max_value);
        AdversaryFamily {
            base: chain(f.base),
            fork: f.fork,
            extensions: f.extensions.into_iter().map(chain).collect(),
        }
    }

    /// The family for a source description shape, if one is defined.
    pub fn for_source(d: &Instance) -> Option<Self> {
        match d {
            Instance::Seq(_) => Some(Self::late_spike(64, 8, 4)),
            Instance::Poset(_) => Some(Self::late_record(64, 8, 4)),
            _ => None,
        }
    }

    /// Whether every extension agrees with the base on stream positions
    /// below the fork.
    pub fn is_well_formed(&self) -> Result<bool> {
        for e in &self.extensions {
            for i in 0..self.fork {
                if e.value_at(i)? != self.base.value_at(i)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// An extension on which a tracker's answer, fixed by what it read of the
/// base, is wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub reduction: String,
    pub base: Instance,
    pub instance: Instance,
    pub fork: u64,
    /// `forward` or `backward`.
    pub check: String,
    pub input: Witness,
    pub output: Witness,
    /// Largest stream position the tracker read.
    pub last_read: u64,
    pub probes: u64,
}

impl Counterexample {
    /// Whether a plain verification run on the recorded instance fails.
    pub fn replays(&self, r: &dyn Reduction, horizon: u64) -> Result<bool> {
        let cfg = VerifyConfig {
            horizon,
            bound: self.input.magnitude().try_into().unwrap_or(u64::MAX),
            ..VerifyConfig::default()
        };
        Ok(!verify(r, &self.instance, &cfg)?.pass)
    }
}

pub const MAX_PROBES: u64 = 1000;

/// Tries each witness up to `bound` on the base, forward then backward,
/// against each extension in order. One probe is one (witness, extension)
/// comparison. The first hit is smallest in (witness, extension) order.
pub fn adversary_search(
    r: &dyn Reduction,
    fam: &AdversaryFamily,
    horizon: u64,
    bound: u64,
    max_probes: u64,
) -> Result<Option<Counterexample>> {
    let budget = default_budget(horizon, fam.base.universe().max(fam.fork + fam.extensions.len() as u64));
    let (source, target) = (r.source(), r.target());
    let base_image = r.image(&fam.base, horizon)?;
    let images = fam
        .extensions
        .iter()
        .map(|e| r.image(e, horizon))
        .collect::<Result<Vec<_>>>()?;
    let mut probes = 0;

    let run = |w: &Witness, d: &Instance, forward: bool| {
        let h = StreamHandle::of(d, budget);
        let out = if forward { r.forward(w, &h) } else { r.backward(w, &h) };
        (out, h.log())
    };

    let mut attempts: Vec<(bool, Witness)> = Vec::new();
    if !r.is_demi() {
        attempts.extend(source.witnesses_upto(&fam.base, bound)?.into_iter().map(|w| (true, w)));
    }
    attempts.extend(target.witnesses_upto(&base_image, bound)?.into_iter().map(|v| (false, v)));

    for (forward, w) in attempts {
        let (out, log) = run(&w, &fam.base, forward);
        let Ok(out) = out else { continue };
        let last_read = log.iter().map(|(i, _)| *i).max().unwrap_or(0);
        for (e, img) in fam.extensions.iter().zip(&images) {
            probes += 1;
            if probes > max_probes {
                return Ok(None);
            }
            let agrees = log.iter().all(|(i, v)| e.value_at(*i).as_ref() == Ok(v));
            if !agrees {
                continue;
            }
            let (input_ok, output_ok) = if forward {
                (source.is_valid(e, &w)?, target.is_valid(img, &out)?)
            } else {
                (target.is_valid(img, &w)?, source.is_valid(e, &out)?)
            };
            if input_ok && !output_ok {
                // the tracker cannot tell `e` from the base; confirm by replay
                let (again, _) = run(&w, e, forward);
                if again.as_ref() != Ok(&out) {
                    continue;
                }
                return Ok(Some(Counterexample {
                    reduction: r.id(),
                    base: fam.base.clone(),
                    instance: e.clone(),
                    fork: fam.fork,
                    check: if forward { "forward" } else { "backward" }.into(),
                    input: w,
                    output: out,
                    last_read,
                    probes,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{BddSeqToPoTop, PoTopToBddSeq};

    #[test]
    fn families_agree_below_the_fork() {
        assert!(AdversaryFamily::late_spike(64, 8, 4).is_well_formed().unwrap());
        assert!(AdversaryFamily::late_record(64, 8, 4).is_well_formed().unwrap());
        let bad = AdversaryFamily {
            fork: 70,
            ..AdversaryFamily::late_spike(64, 8, 4)
        };
        assert!(!bad.is_well_formed().unwrap());
    }

    #[test]
    fn late_spike_breaks_the_record_chain_reduction() {
        let fam = AdversaryFamily::late_spike(64, 8, 4);
        let cx = adversary_search(&BddSeqToPoTop, &fam, 256, 16, MAX_PROBES).unwrap().unwrap();
        assert!(cx.probes <= MAX_PROBES);
        assert!(cx.last_read < cx.fork);
        assert_eq!(cx.check, "forward");
        assert!(cx.replays(&BddSeqToPoTop, 256).unwrap());
    }

    #[test]
    fn sound_reduction_survives_the_analogous_family() {
        let fam = AdversaryFamily::late_record(64, 8, 4);
        let r = PoTopToBddSeq { literal: false };
        assert_eq!(adversary_search(&r, &fam, 256, 16, MAX_PROBES).unwrap(), None);
    }

    #[test]
    fn single_extension_family_is_degenerate() {
        let fam = AdversaryFamily {
            extensions: vec![Instance::Seq(SeqInstance::zeros())],
            ..AdversaryFamily::late_spike(64, 0, 0)
        };
        assert_eq!(adversary_search(&BddSeqToPoTop, &fam, 256, 16, MAX_PROBES).unwrap(), None);
    }
}
