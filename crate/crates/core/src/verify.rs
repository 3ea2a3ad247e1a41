//! Checking the three conditions of a reduction on one instance, plus
//! stream/description agreement and continuity.

use crate::error::{Error, Result};
use crate::instance::{Instance, Value};
use crate::reduction::Reduction;
use crate::stream::{default_budget, StreamHandle};
use crate::witness::Witness;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const DEFAULT_HORIZON: u64 = 256;
pub const DEFAULT_BOUND: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub horizon: u64,
    pub bound: u64,
    /// Per-operation step budget; `None` uses `10 * horizon * (universe + 1)`.
    pub budget: Option<u64>,
    /// Re-run every operation at twice the budget and compare.
    pub continuity: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            horizon: DEFAULT_HORIZON,
            bound: DEFAULT_BOUND,
            budget: None,
            continuity: false,
        }
    }
}

/// A failed check, kept for the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub input: Option<Witness>,
    pub output: Option<Witness>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLengths {
    pub agreement: u64,
    pub forward_max: u64,
    pub backward_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub source_member: Option<bool>,
    pub target_member: Option<bool>,
    pub membership_ok: bool,
    pub forward_checked: u64,
    pub forward_ok: bool,
    pub backward_checked: u64,
    pub backward_ok: bool,
    pub agreement_ok: bool,
    /// `None` when not sampled.
    pub continuity_ok: Option<bool>,
    pub divergences: u64,
    pub traces: TraceLengths,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

/// Everything one run of the operations produced, compared across budgets.
#[derive(PartialEq)]
struct Outcome {
    prefix: (std::result::Result<Vec<Value>, Error>, Vec<(u64, Value)>),
    forward: Vec<(std::result::Result<Witness, Error>, Vec<(u64, Value)>)>,
    backward: Vec<(std::result::Result<Witness, Error>, Vec<(u64, Value)>)>,
}

const MAX_FAILURES: usize = 8;

fn run_ops(
    r: &dyn Reduction,
    d: &Arc<Instance>,
    horizon: u64,
    budget: u64,
    fwd: &[Witness],
    bwd: &[Witness],
) -> Outcome {
    let h = StreamHandle::new(d.clone(), budget);
    let prefix = (r.image_prefix(&h, horizon), h.log());
    let forward = fwd
        .iter()
        .map(|w| {
            let h = StreamHandle::new(d.clone(), budget);
            (r.forward(w, &h), h.log())
        })
        .collect();
    let backward = bwd
        .iter()
        .map(|v| {
            let h = StreamHandle::new(d.clone(), budget);
            (r.backward(v, &h), h.log())
        })
        .collect();
    Outcome {
        prefix,
        forward,
        backward,
    }
}

/// Runs every check of the contract on `d`. Errors are recorded in the
/// trial, never returned, except for a variant mismatch of `d` itself.
pub fn verify(r: &dyn Reduction, d: &Instance, cfg: &VerifyConfig) -> Result<TrialRecord> {
    r.source().check_variant(d)?;
    if let Some(v) = r.input_variant().filter(|&v| v != d.variant()) {
        return Err(Error::mismatch(v.to_string(), d.variant().to_string()));
    }
    let budget = cfg.budget.unwrap_or_else(|| default_budget(cfg.horizon, d.universe()));
    let mut failures = Vec::new();
    let mut divergences = 0;
    let fail = |failures: &mut Vec<Failure>, check: &str, input, output, detail: String| {
        if failures.len() < MAX_FAILURES {
            failures.push(Failure {
                check: check.into(),
                input,
                output,
                detail,
            });
        }
    };

    let source_member = r.source().is_member(d);
    let image = r.image(d, cfg.horizon);
    let target_member = image.as_ref().map_err(Clone::clone).and_then(|img| r.target().is_member(img));
    let membership_ok = matches!((&source_member, &target_member), (Ok(a), Ok(b)) if a == b);
    if !membership_ok {
        fail(
            &mut failures,
            "membership",
            None,
            None,
            format!("source {source_member:?}, target {target_member:?}"),
        );
    }

    let src_ws = r.source().witnesses_upto(d, cfg.bound).unwrap_or_default();
    let fwd_inputs: Vec<Witness> = if r.is_demi() { Vec::new() } else { src_ws };
    let tgt_ws = match &image {
        Ok(img) => r.target().witnesses_upto(img, cfg.bound).unwrap_or_default(),
        Err(_) => Vec::new(),
    };

    let shared = Arc::new(d.clone());
    let outcome = run_ops(r, &shared, cfg.horizon, budget, &fwd_inputs, &tgt_ws);
    let mut traces = TraceLengths {
        agreement: outcome.prefix.1.len() as u64,
        ..TraceLengths::default()
    };

    let mut agreement_ok = true;
    match (&outcome.prefix.0, &image) {
        (Ok(values), Ok(img)) => {
            for (i, v) in values.iter().enumerate() {
                match img.value_at(i as u64) {
                    Ok(expected) if &expected == v => {}
                    other => {
                        agreement_ok = false;
                        fail(
                            &mut failures,
                            "agreement",
                            None,
                            None,
                            format!("position {i}: stream {v}, description {other:?}"),
                        );
                        break;
                    }
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            agreement_ok = false;
            divergences += e.is_divergence() as u64;
            fail(&mut failures, "agreement", None, None, e.to_string());
        }
    }

    let mut forward_ok = true;
    if let Ok(img) = &image {
        for (w, (res, log)) in fwd_inputs.iter().zip(&outcome.forward) {
            traces.forward_max = traces.forward_max.max(log.len() as u64);
            let verdict = res.as_ref().map_err(Clone::clone).and_then(|v| r.target().is_valid(img, v));
            if !matches!(verdict, Ok(true)) {
                forward_ok = false;
                if let Err(e) = &res {
                    divergences += e.is_divergence() as u64;
                }
                fail(
                    &mut failures,
                    "forward",
                    Some(w.clone()),
                    res.as_ref().ok().cloned(),
                    format!("{verdict:?}"),
                );
            }
        }
    }

    let mut backward_ok = true;
    for (v, (res, log)) in tgt_ws.iter().zip(&outcome.backward) {
        traces.backward_max = traces.backward_max.max(log.len() as u64);
        let verdict = res.as_ref().map_err(Clone::clone).and_then(|w| r.source().is_valid(d, w));
        if !matches!(verdict, Ok(true)) {
            backward_ok = false;
            if let Err(e) = &res {
                divergences += e.is_divergence() as u64;
            }
            fail(
                &mut failures,
                "backward",
                Some(v.clone()),
                res.as_ref().ok().cloned(),
                format!("{verdict:?}"),
            );
        }
    }

    let mut pass = membership_ok && agreement_ok && forward_ok && backward_ok;
    let continuity_ok = if cfg.continuity && pass {
        let again = run_ops(r, &shared, cfg.horizon, budget.saturating_mul(2), &fwd_inputs, &tgt_ws);
        let same = again == outcome;
        if !same {
            fail(&mut failures, "continuity", None, None, "outputs or logs changed at doubled budget".into());
        }
        pass &= same;
        Some(same)
    } else {
        None
    };

    Ok(TrialRecord {
        source_member: source_member.ok(),
        target_member: target_member.ok(),
        membership_ok,
        forward_checked: fwd_inputs.len() as u64,
        forward_ok,
        backward_checked: tgt_ws.len() as u64,
        backward_ok,
        agreement_ok,
        continuity_ok,
        divergences,
        traces,
        failures,
        pass,
    })
}

/// Whether `r_+(r_-(k, x), x) = k`.
pub fn split_check(r: &dyn Reduction, d: &Instance, k: &Witness, budget: u64) -> Result<bool> {
    let shared = Arc::new(d.clone());
    let v = r.forward(k, &StreamHandle::new(shared.clone(), budget))?;
    let back = r.backward(&v, &StreamHandle::new(shared, budget))?;
    Ok(&back == k)
}
