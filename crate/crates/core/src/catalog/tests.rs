use super::*;
use crate::coding::{pair, triple, Bits};
use crate::instance::graph::{path_vertex, HUB};
use crate::instance::order::column_element;
use crate::instance::{
    ActionInstance, ApproxRule, Edge, FamilySeqInstance, GraphInstance, Instance, PosetInstance, PreRealInstance,
    Presentation, RealSeqInstance, RealTarget, Seq, SeqInstance, Tail, Value, Q,
};
use crate::problems::{Catalog, Problem};
use crate::reduction::Reduction;
use crate::stream::StreamHandle;
use crate::verify::{split_check, verify, VerifyConfig};
use crate::witness::Witness;
use num_bigint::BigInt;
use num_rational::BigRational;

fn handle(d: &Instance) -> StreamHandle {
    StreamHandle::of(d, 1 << 20)
}

fn fwd(r: &dyn Reduction, d: &Instance, w: Witness) -> Witness {
    r.forward(&w, &handle(d)).unwrap()
}

fn bwd(r: &dyn Reduction, d: &Instance, v: Witness) -> Witness {
    r.backward(&v, &handle(d)).unwrap()
}

fn assert_passes(r: &dyn Reduction, d: &Instance) {
    let cfg = VerifyConfig {
        horizon: 64,
        bound: 8,
        continuity: true,
        ..VerifyConfig::default()
    };
    let t = verify(r, d, &cfg).unwrap();
    assert!(t.pass, "{} on {d:?}: {:?}", r.id(), t.failures);
}

fn stream_values(d: &Instance, len: u64) -> Vec<Value> {
    (0..len).map(|i| d.value_at(i).unwrap()).collect()
}

fn column(p: usize) -> SeqInstance {
    SeqInstance::spike(p)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn conv_to_fin_takes_differences() {
    let r = ConvToFin;
    let x = Instance::seq(vec![3, 3, 5], Tail::Const(5));
    let img = r.image(&x, 16).unwrap();
    let expected = Instance::seq(vec![0, 1], Tail::Const(0));
    assert_eq!(stream_values(&img, 12), stream_values(&expected, 12));
    assert!(Catalog::Fin.is_valid(&img, &fwd(&r, &x, Witness::Nat(2))).unwrap());
    assert!(Catalog::Conv.is_valid(&x, &bwd(&r, &x, Witness::Nat(5))).unwrap());
    let flat = Instance::seq(vec![], Tail::Const(7));
    assert!(Catalog::Fin.is_valid(&r.image(&flat, 8).unwrap(), &Witness::Nat(0)).unwrap());
    for d in [
        x,
        flat,
        Instance::seq(vec![1], Tail::Periodic(vec![2, 2, 3])),
        Instance::seq(vec![4], Tail::Ramp),
    ] {
        assert_passes(&r, &d);
    }
}

#[test]
fn fin_to_qpre_examples() {
    let r = FinToQPre;
    let zeros = Instance::seq(vec![], Tail::Const(0));
    assert_eq!(fwd(&r, &zeros, Witness::Nat(0)), Witness::frac(1u32, 0));
    let one = Instance::seq(vec![1], Tail::Const(0));
    assert_eq!(fwd(&r, &one, Witness::Nat(1)), Witness::frac(2u32, 2));
    assert_eq!(bwd(&r, &one, Witness::frac(1u32, 1)), Witness::Nat(1));
    for d in [zeros, one, Instance::seq(vec![0, 1, 1], Tail::Const(0)), Instance::seq(vec![], Tail::Const(1))] {
        assert_passes(&r, &d);
    }
}

#[test]
fn fin_to_qpre_backward_reads_the_largest_square() {
    // sum over {0, 2} = 1 + 1/16
    let x = Instance::seq(vec![1, 0, 1], Tail::Const(0));
    assert_eq!(bwd(&FinToQPre, &x, Witness::frac(16u32, 17)), Witness::Nat(3));
}

#[test]
fn qpre_to_conv_zero_and_half() {
    let r = QPreToConv;
    let zero = Instance::PreReal(PreRealInstance::rational(Q::int(0), ApproxRule::Exact));
    assert!(predictions(zero.expect_pre_real().unwrap(), 20).unwrap().iter().all(|&n| n == 1));
    assert_eq!(fwd(&r, &zero, Witness::frac(1u32, 0)), Witness::Nat(0));
    let back = bwd(&r, &zero, Witness::Nat(0));
    assert_eq!(back.as_rational(), Some(rat(0, 1)));

    // b = ceil(1/2) + 2 = 3, so the prediction settles at the denominator of 1/6
    let half = Instance::PreReal(PreRealInstance::rational(Q::new(1, 2), ApproxRule::Exact));
    let p = predictions(half.expect_pre_real().unwrap(), 40).unwrap();
    assert_eq!(*p.last().unwrap(), 6);
    let s = fwd(&r, &half, Witness::frac(2u32, 1));
    assert_eq!(bwd(&r, &half, s).as_rational(), Some(rat(1, 2)));

    for rule in [ApproxRule::Exact, ApproxRule::Below, ApproxRule::Above, ApproxRule::Alternating] {
        for q in [Q::new(1, 2), Q::new(-3, 4), Q::int(2), Q::new(5, 7)] {
            assert_passes(&r, &Instance::PreReal(PreRealInstance::rational(q, rule)));
        }
    }
}

#[test]
fn qpre_to_conv_irrational_is_nonmember_on_both_sides() {
    let x = Instance::PreReal(PreRealInstance {
        target: RealTarget::SquareDyadicSum(SeqInstance::new(vec![], Tail::Const(1))),
        approx: ApproxRule::Exact,
    });
    let img = QPreToConv.image(&x, 64).unwrap();
    assert!(!Catalog::QPre.is_member(&x).unwrap());
    assert!(!Catalog::Conv.is_member(&img).unwrap());
    assert_passes(&QPreToConv, &x);
    let finite = Instance::PreReal(PreRealInstance {
        target: RealTarget::SquareDyadicSum(SeqInstance::new(vec![1, 0, 1], Tail::Const(0))),
        approx: ApproxRule::Exact,
    });
    assert_passes(&QPreToConv, &finite);
}

#[test]
fn bddseq_to_potop_examples() {
    let r = BddSeqToPoTop;
    let x = Instance::seq(vec![2], Tail::Const(1));
    let p = fwd(&r, &x, Witness::Nat(2));
    assert_eq!(p, Witness::Nat(0));
    assert!(Catalog::PoTop.is_valid(&r.image(&x, 8).unwrap(), &p).unwrap());
    let zeros = Instance::seq(vec![], Tail::Const(0));
    assert_eq!(fwd(&r, &zeros, Witness::Nat(0)), Witness::Nat(0));
}

#[test]
fn bddseq_to_potop_is_fooled_by_a_late_record() {
    let r = BddSeqToPoTop;
    let quiet = Instance::seq(vec![0; 101], Tail::Const(0));
    let mut late = vec![0; 101];
    late[100] = 3;
    let late = Instance::seq(late, Tail::Const(0));
    let (hq, hl) = (handle(&quiet), handle(&late));
    let wq = r.forward(&Witness::Nat(3), &hq).unwrap();
    let wl = r.forward(&Witness::Nat(3), &hl).unwrap();
    assert_eq!(wq, wl);
    assert_eq!(hq.log(), hl.log());
    assert!(hq.log().iter().all(|(i, _)| *i < 50));
    assert!(Catalog::PoTop.is_valid(&r.image(&quiet, 8).unwrap(), &wq).unwrap());
    assert!(!Catalog::PoTop.is_valid(&r.image(&late, 8).unwrap(), &wl).unwrap());
}

#[test]
fn potop_to_bddseq_examples() {
    let r = PoTopToBddSeq { literal: false };
    let p = Instance::Poset(PosetInstance::finite([3, 5], vec![(3, 5)]));
    let img = r.image(&p, 12).unwrap();
    let phi: Vec<u64> = (0..8).map(|i| img.value_at(i).unwrap().nat().unwrap()).collect();
    // stages 1 and 2 have no greatest element yet, so they are reported too
    assert_eq!(phi, vec![0, 1, 2, 3, 0, 5, 0, 0]);
    assert_eq!(fwd(&r, &p, Witness::Nat(5)), Witness::Nat(5));
    assert!(Catalog::BddSeq.is_valid(&img, &Witness::Nat(5)).unwrap());
    assert_eq!(bwd(&r, &p, Witness::Nat(5)), Witness::Nat(5));

    let single = Instance::Poset(PosetInstance::finite([0], vec![]));
    let img = r.image(&single, 8).unwrap();
    assert!(Catalog::BddSeq.is_valid(&img, &fwd(&r, &single, Witness::Nat(0))).unwrap());
    assert_eq!(bwd(&r, &single, Witness::Nat(0)), Witness::Nat(0));

    for d in [
        p,
        single,
        Instance::Poset(PosetInstance::finite([], vec![])),
        Instance::Poset(PosetInstance::finite([1, 4, 6], vec![(1, 6)])),
        Instance::Poset(PosetInstance::finite([0, 2, 3], vec![(2, 3), (0, 3)])),
        Instance::Poset(PosetInstance::RecordChain { seq: SeqInstance::new(vec![1, 0, 3], Tail::Const(2)) }),
        Instance::Poset(PosetInstance::RecordChain { seq: SeqInstance::new(vec![5], Tail::Ramp) }),
    ] {
        assert_passes(&r, &d);
    }
}

#[test]
fn literal_potop_to_bddseq_fails_without_a_greatest_element() {
    let r = PoTopToBddSeq { literal: true };
    for d in [
        Instance::Poset(PosetInstance::finite([], vec![])),
        Instance::Poset(PosetInstance::finite([1, 2], vec![])),
    ] {
        let t = verify(&r, &d, &VerifyConfig { horizon: 32, ..VerifyConfig::default() }).unwrap();
        assert!(!t.membership_ok);
    }
}

fn fun_graph(vertices: &[u64], edges: Vec<Edge>) -> Instance {
    Instance::Graph(GraphInstance::finite(Presentation::Function, vertices.iter().copied(), edges))
}

#[test]
fn subdivision_examples() {
    let r = DisConnFunToSub;
    let g = fun_graph(&[0, 1, 2, 3], vec![Edge::with_id(0, 1, 2)]);
    let img = r.image(&g, 8).unwrap();
    let mid = 2 * triple(1, 2, 0) + 1;
    let sub = img.expect_graph(Presentation::Subset).unwrap();
    assert!(sub.adjacent(2, mid).unwrap() && sub.adjacent(mid, 4).unwrap());
    assert!(!sub.adjacent(2, 4).unwrap());
    assert_eq!(fwd(&r, &g, Witness::pair(1, 3)), Witness::pair(2, 6));
    assert_eq!(bwd(&r, &g, Witness::pair(2, 6)), Witness::pair(1, 3));
    assert_eq!(bwd(&r, &g, Witness::pair(mid, 6)), Witness::pair(1, 3));
    let empty = fun_graph(&[0, 1, 2], vec![]);
    assert_eq!(bwd(&r, &empty, fwd(&r, &empty, Witness::pair(0, 2))), Witness::pair(0, 2));
    for d in [g, empty, fun_graph(&[0, 1, 2], vec![Edge::with_id(4, 0, 1), Edge::with_id(9, 1, 2)])] {
        assert_passes(&r, &d);
        assert_passes(&DisConnFunToOrbit, &d);
    }
}

#[test]
fn inclusion_map_examples() {
    let g = Instance::Graph(GraphInstance::finite(Presentation::Subset, [0, 1, 2, 5], vec![Edge::new(2, 1), Edge::new(0, 5)]));
    assert_passes(&DisConnSubToFun, &g);
    let paths = HalfTruthToDisConn.image(&Instance::Family(FamilySeqInstance::all_zero().except(1, column(2))), 16).unwrap();
    assert_passes(&DisConnSubToFun, &paths);
    let chain = crate::reduction::compose(Arc::new(DisConnFunToSub), Arc::new(DisConnSubToFun)).unwrap();
    assert_passes(chain.as_ref(), &fun_graph(&[0, 1, 2], vec![Edge::with_id(3, 0, 2)]));
}

#[test]
fn action_examples() {
    let act = Instance::Action(ActionInstance::trivial([0, 1, 2]).with_generator(0, [(0, 1), (1, 0)]));
    let r = OrbitToDisConnFun;
    let img = r.image(&act, 8).unwrap();
    let g = img.expect_graph(Presentation::Function).unwrap();
    assert!(g.connected(0, 1).unwrap() && !g.connected(0, 2).unwrap());
    assert_eq!(fwd(&r, &act, Witness::pair(0, 2)), Witness::pair(0, 2));
    assert_passes(&r, &act);
    assert_passes(&r, &Instance::Action(ActionInstance::trivial([0, 3])));

    let graph = fun_graph(&[0, 1, 2], vec![Edge::with_id(0, 1, 2)]);
    let back = DisConnFunToOrbit.image(&graph, 8).unwrap();
    let a = back.expect_action().unwrap();
    let e = ActionInstance::generator_code(0, false).unwrap();
    assert_eq!((a.act(e, 1), a.act(e, 2), a.act(e, 0)), (2, 1, 0));
    assert_eq!(fwd(&DisConnFunToOrbit, &graph, Witness::pair(0, 1)), Witness::pair(0, 1));
}

fn family(ex: &[(u64, usize)]) -> Instance {
    let f = ex
        .iter()
        .fold(FamilySeqInstance::all_zero(), |f, &(n, p)| f.except(n, column(p)));
    Instance::Family(f)
}

#[test]
fn column_path_examples() {
    let r = HalfTruthToDisConn;
    let x = family(&[(0, 3)]);
    let img = r.image(&x, 8).unwrap();
    let w = fwd(&r, &x, Witness::pair(0, 1));
    assert_eq!(w, Witness::pair(path_vertex(0, 0), path_vertex(1, 0)));
    assert!(Catalog::DisConn.is_valid(&img, &w).unwrap());
    let w = fwd(&r, &x, Witness::pair(1, 1));
    assert_eq!(w, Witness::pair(path_vertex(1, 0), HUB));
    assert!(Catalog::DisConn.is_valid(&img, &w).unwrap());
    assert_eq!(bwd(&r, &x, Witness::pair(path_vertex(2, 5), HUB)), Witness::pair(2, 2));
    assert_passes(&r, &x);
}

#[test]
fn dense_order_examples() {
    let r = TruthToNonDense;
    let x = family(&[(0, 2)]);
    let w = fwd(&r, &x, Witness::Nat(1));
    assert_eq!(w, Witness::pair(pair(1, 0), pair(2, 0)));
    assert_eq!(bwd(&r, &x, w), Witness::Nat(1));
    let zero = family(&[]);
    assert_eq!(fwd(&r, &zero, Witness::Nat(0)), Witness::pair(pair(0, 0), pair(1, 0)));
    for k in 0..=8 {
        assert!(split_check(&r, &zero, &Witness::Nat(k), 1 << 16).unwrap());
    }
    assert_passes(&r, &x);
}

#[test]
fn atom_examples() {
    let r = TruthToPoAtom;
    let zero = family(&[]);
    assert_eq!(fwd(&r, &zero, Witness::Nat(2)), Witness::Nat(column_element(2, 0)));
    let x = family(&[(1, 4)]);
    let img = r.image(&x, 8).unwrap();
    assert!(!Catalog::PoAtom.is_valid(&img, &Witness::Nat(column_element(1, 0))).unwrap());
    assert!(Catalog::PoAtom.is_valid(&img, &fwd(&r, &x, Witness::Nat(0))).unwrap());
    assert_eq!(bwd(&r, &x, Witness::Nat(column_element(3, 0))), Witness::Nat(3));
    assert_passes(&r, &x);
}

#[test]
fn tree_examples() {
    let r = TruthToTr2;
    let bits = |s: &str| Witness::Bits(Bits(s.chars().map(|c| c == '1').collect()));
    let zero = family(&[]);
    assert_eq!(fwd(&r, &zero, Witness::Nat(0)), Witness::tuple2(bits("0"), bits("1")));
    assert_eq!(bwd(&r, &zero, Witness::tuple2(bits("0"), bits("1"))), Witness::Nat(0));
    let x = family(&[(0, 2)]);
    assert_eq!(fwd(&r, &x, Witness::Nat(1)), Witness::tuple2(bits("00"), bits("01")));
    let img = r.image(&x, 8).unwrap();
    let t = match &img {
        Instance::Tree(t) => t,
        _ => unreachable!(),
    };
    assert!(t.contains(&Bits::branch(0, 2)).unwrap());
    assert!(!t.contains(&Bits::branch(0, 3)).unwrap());
    assert_eq!(bwd(&r, &x, Witness::tuple2(bits("000"), bits("001"))), Witness::Nat(2));
    assert_passes(&r, &x);
}

#[test]
fn bounded_sequence_embeddings() {
    let x = Instance::seq(vec![2], Tail::Const(1));
    let w = fwd(&BddNatToRat, &x, Witness::Nat(2));
    let img = BddNatToRat.image(&x, 8).unwrap();
    assert!(Catalog::BddSeq.is_valid(&img, &w).unwrap());
    assert_eq!(bwd(&BddNatToRat, &x, w), Witness::Nat(2));

    let reals = Instance::RealSeq(RealSeqInstance {
        values: Seq::new(vec![Q::new(12, 5)], Tail::Const(Q::int(-1))),
        approx: ApproxRule::Above,
    });
    assert_eq!(fwd(&BddRealToNat, &reals, Witness::frac(5u32, 12)), Witness::Nat(6));

    let ramp = Instance::seq(vec![], Tail::Ramp);
    let img = BddNatToRat.image(&ramp, 8).unwrap();
    assert!(!Catalog::BddSeq.is_member(&img).unwrap());

    for d in [x, ramp, Instance::seq(vec![0, 7], Tail::Periodic(vec![1, 3]))] {
        assert_passes(&BddNatToRat, &d);
    }
    let rats = Instance::RatSeq(Seq::new(vec![Q::new(-7, 3)], Tail::Periodic(vec![Q::new(1, 2), Q::int(0)])));
    assert_passes(&BddRatToReal, &rats);
    for rule in [ApproxRule::Exact, ApproxRule::Below, ApproxRule::Above, ApproxRule::Alternating] {
        for values in [
            Seq::new(vec![Q::new(12, 5)], Tail::Const(Q::int(-1))),
            Seq::new(vec![Q::new(1, 3)], Tail::Ramp),
        ] {
            assert_passes(&BddRealToNat, &Instance::RealSeq(RealSeqInstance { values, approx: rule }));
        }
    }
}

#[test]
fn exactly_one_entry_expects_a_counterexample() {
    let all = entries();
    let odd: Vec<_> = all.iter().filter(|e| e.expected == Expected::Counterexample).map(|e| e.id).collect();
    assert_eq!(odd, vec!["bddseq_to_potop"]);
    for e in &all {
        assert_eq!(e.reduction.id(), e.id);
    }
    assert!(lookup("nope").is_err());
}
