//! Running a reduction over generated instances and assembling reports.

use super::adversary::{adversary_search, AdversaryFamily, Counterexample, MAX_PROBES};
use super::generate::{generate, is_splittable, GeneratorProfile};
use crate::catalog::{CatalogEntry, Expected};
use crate::error::{Error, Result};
use crate::instance::{Instance, Variant};
use crate::problems::Catalog;
use crate::reduction::ReductionRef;
use crate::stream::default_budget;
use crate::verify::{split_check, verify, Failure, TraceLengths, VerifyConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

/// Largest source witness component tried by the split check.
pub const SPLIT_BOUND: u64 = 8;

/// One reduction with the profile its source instances are drawn from.
#[derive(Clone)]
pub struct SuiteEntry {
    pub id: String,
    pub reduction: ReductionRef,
    pub expected: Expected,
    pub problem: Catalog,
    pub variant: Variant,
}

impl SuiteEntry {
    /// `problem` gives ground-truth membership for the reduction's source.
    pub fn new(reduction: ReductionRef, expected: Expected, problem: Catalog, variant: Variant) -> Self {
        SuiteEntry {
            id: reduction.id(),
            reduction,
            expected,
            problem,
            variant,
        }
    }

    pub fn from_catalog(entry: &CatalogEntry) -> Result<Self> {
        let r = entry.reduction.clone();
        let problem = Catalog::parse(&r.source().id())?;
        let variant = r.input_variant().unwrap_or(GeneratorProfile::default_variant(problem));
        Ok(SuiteEntry {
            id: entry.id.to_string(),
            expected: entry.expected,
            reduction: r,
            problem,
            variant,
        })
    }

    pub fn profile(&self, cfg: &SuiteConfig) -> GeneratorProfile {
        GeneratorProfile::new(self.problem, self.variant, cfg.seed, cfg.horizon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: u64,
    pub horizon: u64,
    pub bound: u64,
    pub seed: u64,
    /// Continuity is checked on trials whose index is a multiple of this.
    pub continuity_every: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 200,
            horizon: crate::verify::DEFAULT_HORIZON,
            bound: crate::verify::DEFAULT_BOUND,
            seed: 1,
            continuity_every: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcomes {
    pub membership: bool,
    pub forward: bool,
    pub backward: bool,
    pub agreement: bool,
    pub continuity: Option<bool>,
    /// `Some` on splittable instances: whether every `r_+(r_-(k)) = k`.
    pub split: Option<bool>,
}

/// One line of a report file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialLine {
    pub entry: String,
    pub trial: u64,
    pub digest: String,
    pub source_member: Option<bool>,
    pub outcomes: Outcomes,
    pub traces: TraceLengths,
    pub divergences: u64,
    pub forward_checked: u64,
    pub backward_checked: u64,
    pub split_checked: u64,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub entry: String,
    pub expected: Expected,
    pub trials: u64,
    pub passed: u64,
    pub non_members: u64,
    pub divergences: u64,
    pub continuity_checked: u64,
    pub split_checked: u64,
    pub counterexample: Option<Counterexample>,
    /// No trials ran, so a pass is vacuous.
    pub vacuous: bool,
    pub matched: bool,
    #[serde(skip)]
    pub lines: Vec<TrialLine>,
}

impl EntryReport {
    pub fn balanced(&self) -> bool {
        self.non_members * 4 >= self.trials
    }
}

/// Short content digest of an instance description.
pub fn digest(d: &Instance) -> String {
    let json = serde_json::to_vec(d).expect("instances serialize");
    hex::encode(&Sha256::digest(json)[..8])
}

fn split_run(e: &SuiteEntry, d: &Instance, budget: u64) -> (u64, Option<bool>) {
    if !is_splittable(d) || e.reduction.is_demi() {
        return (0, None);
    }
    let ws = e.reduction.source().witnesses_upto(d, SPLIT_BOUND).unwrap_or_default();
    let ok = ws
        .iter()
        .all(|k| matches!(split_check(e.reduction.as_ref(), d, k, budget), Ok(true)));
    (ws.len() as u64, Some(ok))
}

/// Verifies trial `k` of an entry.
pub fn run_trial(e: &SuiteEntry, cfg: &SuiteConfig, k: u64) -> TrialLine {
    let d = generate(&e.profile(cfg), k);
    let vcfg = VerifyConfig {
        horizon: cfg.horizon,
        bound: cfg.bound,
        budget: None,
        continuity: cfg.continuity_every > 0 && k % cfg.continuity_every == 0,
    };
    let digest = digest(&d);
    let (split_checked, split) = split_run(e, &d, default_budget(cfg.horizon, d.universe()));
    match verify(e.reduction.as_ref(), &d, &vcfg) {
        Ok(t) => TrialLine {
            entry: e.id.clone(),
            trial: k,
            digest,
            source_member: t.source_member,
            outcomes: Outcomes {
                membership: t.membership_ok,
                forward: t.forward_ok,
                backward: t.backward_ok,
                agreement: t.agreement_ok,
                continuity: t.continuity_ok,
                split,
            },
            traces: t.traces,
            divergences: t.divergences,
            forward_checked: t.forward_checked,
            backward_checked: t.backward_checked,
            split_checked,
            failures: t.failures,
            pass: t.pass && split != Some(false),
        },
        Err(err) => TrialLine {
            entry: e.id.clone(),
            trial: k,
            digest,
            source_member: None,
            outcomes: Outcomes {
                membership: false,
                forward: false,
                backward: false,
                agreement: false,
                continuity: None,
                split,
            },
            traces: TraceLengths::default(),
            divergences: err.is_divergence() as u64,
            forward_checked: 0,
            backward_checked: 0,
            split_checked,
            failures: vec![Failure {
                check: "variant".into(),
                input: None,
                output: None,
                detail: err.to_string(),
            }],
            pass: false,
        },
    }
}

/// The adversary run for entries expected to be falsified.
fn attack(e: &SuiteEntry, cfg: &SuiteConfig) -> Option<Counterexample> {
    if e.expected != Expected::Counterexample {
        return None;
    }
    let sample = generate(&e.profile(cfg), 0);
    let fam = AdversaryFamily::for_source(&sample)?;
    adversary_search(e.reduction.as_ref(), &fam, cfg.horizon, cfg.bound, MAX_PROBES).ok()?
}

/// Runs every entry on `cfg.trials` generated instances. Trials run in
/// parallel; lines come back ordered by entry, then trial.
pub fn run_suite(entries: &[SuiteEntry], cfg: &SuiteConfig) -> Vec<EntryReport> {
    let jobs: Vec<(usize, u64)> = (0..entries.len())
        .flat_map(|i| (0..cfg.trials).map(move |k| (i, k)))
        .collect();
    let lines: Vec<TrialLine> = jobs
        .par_iter()
        .map(|&(i, k)| run_trial(&entries[i], cfg, k))
        .collect();
    let attacks: Vec<Option<Counterexample>> = entries.par_iter().map(|e| attack(e, cfg)).collect();
    let mut lines = lines.into_iter();
    entries
        .iter()
        .zip(attacks)
        .map(|(e, counterexample)| {
            let lines: Vec<TrialLine> = lines.by_ref().take(cfg.trials as usize).collect();
            let passed = lines.iter().filter(|l| l.pass).count() as u64;
            let divergences = lines.iter().map(|l| l.divergences).sum();
            let matched = match e.expected {
                Expected::Pass => passed == cfg.trials && divergences == 0,
                Expected::Counterexample => counterexample.is_some(),
            };
            EntryReport {
                entry: e.id.clone(),
                expected: e.expected,
                trials: cfg.trials,
                passed,
                non_members: lines.iter().filter(|l| l.source_member == Some(false)).count() as u64,
                divergences,
                continuity_checked: lines.iter().filter(|l| l.outcomes.continuity.is_some()).count() as u64,
                split_checked: lines.iter().map(|l| l.split_checked).sum(),
                counterexample,
                vacuous: cfg.trials == 0,
                matched,
                lines,
            }
        })
        .collect()
}

/// File-name form of an entry id.
fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// One `<entry>.jsonl` per entry with a line per trial, and `summary.jsonl`
/// with a line per entry.
pub fn write_reports(dir: &Path, reports: &[EntryReport]) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut summary = String::new();
    for r in reports {
        let mut body = String::new();
        for l in &r.lines {
            body.push_str(&serde_json::to_string(l).expect("lines serialize"));
            body.push('\n');
        }
        fs::write(dir.join(format!("{}.jsonl", file_stem(&r.entry))), body).map_err(io)?;
        summary.push_str(&serde_json::to_string(r).expect("reports serialize"));
        summary.push('\n');
    }
    fs::write(dir.join("summary.jsonl"), summary).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    fn small() -> SuiteConfig {
        SuiteConfig {
            trials: 12,
            horizon: 64,
            bound: 6,
            seed: 3,
            continuity_every: 4,
        }
    }

    #[test]
    fn reports_are_ordered_and_reproducible() {
        let entries: Vec<SuiteEntry> = ["conv_to_fin", "bddseq_nat_to_rat"]
            .iter()
            .map(|id| SuiteEntry::from_catalog(&lookup(id).unwrap()).unwrap())
            .collect();
        let a = run_suite(&entries, &small());
        let b = run_suite(&entries, &small());
        assert_eq!(a, b);
        assert_eq!(a[0].entry, "conv_to_fin");
        assert!(a[0].lines.iter().enumerate().all(|(i, l)| l.trial == i as u64));
        assert!(a.iter().all(|r| r.matched && r.balanced()), "{a:#?}");
        assert_eq!(a[0].continuity_checked, 3);
    }

    #[test]
    fn falsified_entry_carries_a_counterexample() {
        let e = SuiteEntry::from_catalog(&lookup("bddseq_to_potop").unwrap()).unwrap();
        let r = &run_suite(&[e.clone()], &small())[0];
        let cx = r.counterexample.as_ref().unwrap();
        assert!(r.matched);
        assert!(cx.replays(e.reduction.as_ref(), 64).unwrap());
    }

    #[test]
    fn zero_trials_is_a_flagged_vacuous_pass() {
        let e = SuiteEntry::from_catalog(&lookup("conv_to_fin").unwrap()).unwrap();
        let r = &run_suite(&[e], &SuiteConfig { trials: 0, ..small() })[0];
        assert!(r.matched && r.vacuous);
    }

    #[test]
    fn report_files_round_trip() {
        let e = SuiteEntry::from_catalog(&lookup("conv_to_fin").unwrap()).unwrap();
        let reports = run_suite(&[e], &small());
        let dir = std::env::temp_dir().join(format!("levinlab-suite-{}", std::process::id()));
        write_reports(&dir, &reports).unwrap();
        let text = fs::read_to_string(dir.join("conv_to_fin.jsonl")).unwrap();
        let back: Vec<TrialLine> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, reports[0].lines);
        fs::remove_dir_all(dir).unwrap();
    }
}
