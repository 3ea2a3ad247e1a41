use levinlab::catalog::{entries, lookup, Expected};
use levinlab::family::{BinaryMatrix, Family, Matrix};
use levinlab::generic::{demi_to_fin, disjoint_on, increasing_on, unique_to_fin, uw_normalize};
use levinlab::harness::{generate, run_trial, GeneratorProfile, SuiteConfig, SuiteEntry};
use levinlab::instance::{Instance, Tail, Variant};
use levinlab::stream::StreamHandle;
use levinlab::verify::{verify, VerifyConfig};
use levinlab::{Catalog, Problem, Witness};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small() -> SuiteConfig {
    SuiteConfig {
        trials: 1,
        horizon: 64,
        bound: 8,
        seed: 0,
        continuity_every: 1,
    }
}

fn pool(problem: Catalog, seed: u64, n: u64) -> Vec<Instance> {
    let p = GeneratorProfile::new(problem, Variant::Seq, seed, 256);
    (0..n).map(|k| generate(&p, k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sound_entries_pass_any_seeded_trial(seed in any::<u64>(), k in 0u64..500) {
        for e in entries().iter().filter(|e| e.expected == Expected::Pass) {
            let entry = SuiteEntry::from_catalog(e).unwrap();
            let line = run_trial(&entry, &SuiteConfig { seed, ..small() }, k);
            prop_assert!(line.pass, "{} {:?}", e.id, line.failures);
        }
    }

    #[test]
    fn normalized_pieces_are_disjoint_and_thresholds_increase(seed in any::<u64>()) {
        let fin = pool(Catalog::Fin, seed, 16);
        let conv = pool(Catalog::Conv, seed, 16);
        let bdd = pool(Catalog::BddSeq, seed, 16);
        prop_assert!(disjoint_on(&uw_normalize(BinaryMatrix::ZeroAt).family(), &fin, 40).unwrap());
        prop_assert!(disjoint_on(&uw_normalize(BinaryMatrix::SteadyAt).family(), &conv, 40).unwrap());
        prop_assert!(increasing_on(&Family::FinThreshold, &fin, 40).unwrap());
        prop_assert!(increasing_on(&Family::BoundedBelow, &bdd, 12).unwrap());
        prop_assert!(increasing_on(&Family::Matrix(Matrix::BoundedBy), &bdd, 12).unwrap());
        prop_assert!(increasing_on(&Family::Matrix(Matrix::EventuallyZero), &fin, 40).unwrap());
    }

    #[test]
    fn normalized_union_matches_its_problem(seed in any::<u64>()) {
        for (m, problem) in [(BinaryMatrix::ZeroAt, Catalog::Fin), (BinaryMatrix::SteadyAt, Catalog::Conv)] {
            let fam = uw_normalize(m).family();
            for d in pool(problem, seed, 12) {
                prop_assert_eq!(fam.least_member(&d).unwrap().is_some(), problem.is_member(&d).unwrap());
            }
        }
    }

    #[test]
    fn minimizer_lands_on_the_least_witness(seed in any::<u64>(), extra in 0u64..20) {
        let norm = uw_normalize(BinaryMatrix::ZeroAt);
        for d in pool(Catalog::Fin, seed, 12) {
            let Some(least) = norm.family().least_member(&d).unwrap() else { continue };
            let x = StreamHandle::of(&d, 1 << 20);
            prop_assert_eq!(norm.minimize(least + extra, &x).unwrap(), least);
        }
    }

    #[test]
    fn demi_image_is_a_zero_one_stream(seed in any::<u64>()) {
        let r = demi_to_fin(Matrix::BoundedBy);
        for d in pool(Catalog::BddSeq, seed, 8) {
            let x = StreamHandle::of(&d, 1 << 20);
            let out = r.image_prefix(&x, 48).unwrap();
            prop_assert!(out.iter().all(|v| v.nat().unwrap() <= 1));
        }
    }

    #[test]
    fn fin_to_qpre_forward_is_the_partial_square_sum(seed in any::<u64>()) {
        // oracle: sum over the support of 2^-(n^2), built term by term
        let r = lookup("fin_to_qpre").unwrap().reduction;
        for d in pool(Catalog::Fin, seed, 12) {
            let Instance::Seq(x) = &d else { unreachable!() };
            let Some(first) = (0..64u64).find(|&n| (n..64).all(|m| x.at(m) == 0)) else { continue };
            let mut sum = BigRational::from_integer(BigInt::from(0));
            for n in 0..first {
                if x.at(n) != 0 {
                    sum += BigRational::new(BigInt::from(1), BigInt::from(2).pow((n * n) as u32));
                }
            }
            let w = r.forward(&Witness::Nat(first), &StreamHandle::of(&d, 1 << 20)).unwrap();
            prop_assert_eq!(w.as_rational().unwrap(), sum);
        }
    }
}

#[test]
fn unique_machine_needs_a_disjoint_family() {
    let r = unique_to_fin(Family::FinThreshold);
    let d = Instance::seq(vec![1], Tail::Const(0));
    let t = verify(r.as_ref(), &d, &VerifyConfig::default()).unwrap();
    assert!(!t.pass, "a non-disjoint family must break the machine");
    let ok = unique_to_fin(Family::Normalized(BinaryMatrix::ZeroAt));
    assert!(verify(ok.as_ref(), &d, &VerifyConfig::default()).unwrap().pass);
}
