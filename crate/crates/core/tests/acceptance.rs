//! The eight acceptance criteria, one pass/fail line each.

use levinlab::catalog::{entries, lookup, Expected};
use levinlab::family::{BinaryMatrix, Family, Matrix};
use levinlab::generic::{demi_to_fin, increasing_to_bddseq, unique_to_fin, uw_normalize};
use levinlab::harness::{
    adversary_search, generate, is_splittable, run_suite, write_reports, AdversaryFamily, EntryReport,
    GeneratorProfile, SuiteConfig, SuiteEntry, MAX_PROBES,
};
use levinlab::instance::{Instance, Tail, Variant};
use levinlab::reduction::{compose_chain, injections, weaken, Identity};
use levinlab::verify::{split_check, verify, VerifyConfig};
use levinlab::Catalog;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const HORIZON: u64 = 256;
const BOUND: u64 = 16;
const SEED: u64 = 1;

fn config(trials: u64) -> SuiteConfig {
    SuiteConfig {
        trials,
        horizon: HORIZON,
        bound: BOUND,
        seed: SEED,
        continuity_every: 10,
    }
}

fn catalog_entries() -> Vec<SuiteEntry> {
    entries()
        .iter()
        .map(|e| SuiteEntry::from_catalog(e).unwrap())
        .collect()
}

fn describe(reports: &[EntryReport]) -> String {
    reports
        .iter()
        .filter(|r| !(r.matched && r.balanced()))
        .map(|r| {
            let first = r.lines.iter().find(|l| !l.pass);
            format!(
                "{}: {}/{} passed, {} non-members, {} divergences, first failure {:?}",
                r.entry,
                r.passed,
                r.trials,
                r.non_members,
                r.divergences,
                first.map(|l| (l.trial, &l.failures))
            )
        })
        .collect::<Vec<_>>()
        .join("\n    ")
}

fn all_ok(reports: &[EntryReport]) -> bool {
    reports.iter().all(|r| r.matched && r.balanced() && r.divergences == 0)
}

struct Line {
    ok: bool,
    name: &'static str,
    detail: String,
}

fn criterion_1(reports: &[EntryReport], elapsed: Duration) -> Line {
    let sound: Vec<EntryReport> = reports
        .iter()
        .filter(|r| r.expected == Expected::Pass)
        .cloned()
        .collect();
    let ok = all_ok(&sound) && elapsed < Duration::from_secs(300);
    Line {
        ok,
        name: "catalog soundness",
        detail: format!(
            "{} entries x 200 trials in {:.1}s {}",
            sound.len(),
            elapsed.as_secs_f64(),
            describe(&sound)
        ),
    }
}

fn criterion_2() -> Line {
    let r = lookup("bddseq_to_potop").unwrap().reduction;
    let fam = AdversaryFamily::late_spike(64, 8, 4);
    let found = adversary_search(r.as_ref(), &fam, HORIZON, BOUND, MAX_PROBES).unwrap();
    let (ok, detail) = match &found {
        Some(cx) => {
            let replays = cx.replays(r.as_ref(), HORIZON).unwrap();
            (
                replays && cx.probes <= MAX_PROBES,
                format!(
                    "{} {:?} -> {:?} after {} probes, reads below {}, replays {}",
                    cx.check, cx.input, cx.output, cx.probes, cx.last_read + 1, replays
                ),
            )
        }
        None => (false, "no counterexample".into()),
    };
    Line {
        ok,
        name: "mechanized falsification",
        detail,
    }
}

fn criterion_3() -> Line {
    let normal = uw_normalize(BinaryMatrix::ZeroAt);
    let machines = vec![
        SuiteEntry::new(unique_to_fin(Family::GreatestElement), Expected::Pass, Catalog::PoTop, Variant::Poset),
        SuiteEntry::new(unique_to_fin(normal.family()), Expected::Pass, Catalog::Fin, Variant::Seq),
        SuiteEntry::new(increasing_to_bddseq(Family::BoundedBelow), Expected::Pass, Catalog::BddSeq, Variant::Seq),
    ];
    let reports = run_suite(&machines, &config(100));
    let bad = increasing_to_bddseq(Family::ConstantValue);
    let caught = (0..5).any(|c| {
        let d = Instance::seq(vec![], Tail::Const(c));
        !verify(bad.as_ref(), &d, &VerifyConfig::default()).unwrap().backward_ok
    });
    Line {
        ok: all_ok(&reports) && caught,
        name: "completeness machines",
        detail: format!(
            "3 machines x 100 trials, negative control caught {caught} {}",
            describe(&reports)
        ),
    }
}

fn criterion_4() -> Line {
    let demis = vec![
        SuiteEntry::new(demi_to_fin(Matrix::EventuallyZero), Expected::Pass, Catalog::Fin, Variant::Seq),
        SuiteEntry::new(demi_to_fin(Matrix::BoundedBy), Expected::Pass, Catalog::BddSeq, Variant::Seq),
    ];
    let reports = run_suite(&demis, &config(100));
    Line {
        ok: all_ok(&reports),
        name: "demi-reduction",
        detail: format!("2 matrices x 100 trials {}", describe(&reports)),
    }
}

fn criterion_5(reports: &[EntryReport]) -> Line {
    let chain = compose_chain(&[
        lookup("conv_to_fin").unwrap().reduction,
        lookup("fin_to_qpre").unwrap().reduction,
    ])
    .unwrap();
    let (left, right) = injections(Catalog::Fin.arc(), Catalog::BddSeq.arc());
    let mut laws = vec![
        SuiteEntry::new(chain, Expected::Pass, Catalog::Conv, Variant::Seq),
        SuiteEntry::new(left, Expected::Pass, Catalog::Fin, Variant::Seq),
        SuiteEntry::new(right, Expected::Pass, Catalog::BddSeq, Variant::Seq),
    ];
    for c in [Catalog::Fin, Catalog::PoTop, Catalog::DisConn] {
        laws.push(SuiteEntry::new(
            Identity::arc(c.arc()),
            Expected::Pass,
            c,
            GeneratorProfile::default_variant(c),
        ));
    }
    let passing: Vec<&str> = reports
        .iter()
        .filter(|r| r.expected == Expected::Pass && r.matched)
        .map(|r| r.entry.as_str())
        .collect();
    for e in catalog_entries() {
        if passing.contains(&e.id.as_str()) {
            laws.push(SuiteEntry {
                id: format!("demi({})", e.id),
                reduction: weaken(e.reduction.clone()),
                ..e
            });
        }
    }
    let out = run_suite(&laws, &config(100));
    Line {
        ok: all_ok(&out) && !passing.is_empty(),
        name: "algebra laws",
        detail: format!(
            "chain, 2 injections, 3 identities, {} weakenings x 100 trials {}",
            passing.len(),
            describe(&out)
        ),
    }
}

fn criterion_6() -> Line {
    let mut checked = 0;
    let mut failures = Vec::new();
    for id in ["halftruth_to_disconn", "truth_to_nondense", "truth_to_poatom", "truth_to_tr2"] {
        let e = SuiteEntry::from_catalog(&lookup(id).unwrap()).unwrap();
        let profile = e.profile(&config(200));
        for k in 0..200 {
            let d = generate(&profile, k);
            if !is_splittable(&d) {
                continue;
            }
            let budget = levinlab::stream::default_budget(HORIZON, d.universe());
            for w in e.reduction.source().witnesses_upto(&d, 8).unwrap() {
                checked += 1;
                if !split_check(e.reduction.as_ref(), &d, &w, budget).unwrap_or(false) {
                    failures.push(format!("{id} trial {k} witness {w:?}"));
                }
            }
        }
    }
    Line {
        ok: failures.is_empty() && checked > 0,
        name: "split lemma",
        detail: format!("{checked} identities checked {}", failures.join(", ")),
    }
}

fn criterion_7(reports: &[EntryReport]) -> Line {
    let mut sampled = 0;
    let mut broken = Vec::new();
    for r in reports {
        for l in r.lines.iter().filter(|l| l.trial % 10 == 0 && l.pass) {
            match l.outcomes.continuity {
                Some(true) => sampled += 1,
                _ => broken.push(format!("{} trial {}", r.entry, l.trial)),
            }
        }
    }
    Line {
        ok: broken.is_empty() && sampled > 0,
        name: "continuity",
        detail: format!("{sampled} passing trials re-run at doubled budget {}", broken.join(", ")),
    }
}

fn criterion_8(first: &[EntryReport]) -> Line {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    write_reports(&a, first).unwrap();
    write_reports(&b, &run_suite(&catalog_entries(), &config(200))).unwrap();
    let mut files: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    let differing: Vec<String> = files
        .iter()
        .filter(|f| std::fs::read(a.join(f)).ok() != std::fs::read(b.join(f)).ok())
        .map(|f| f.to_string_lossy().into_owned())
        .collect();
    Line {
        ok: differing.is_empty() && !files.is_empty(),
        name: "determinism",
        detail: format!("{} report files compared {}", files.len(), differing.join(", ")),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = run_suite(&catalog_entries(), &config(200));
    let elapsed = start.elapsed();
    let lines = [
        criterion_1(&reports, elapsed),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&reports),
        criterion_6(),
        criterion_7(&reports),
        criterion_8(&reports),
    ];
    let mut failed = 0;
    for (i, l) in lines.iter().enumerate() {
        println!("criterion {} {}: {} ({})", i + 1, l.name, if l.ok { "PASS" } else { "FAIL" }, l.detail.trim());
        failed += !l.ok as u32;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
