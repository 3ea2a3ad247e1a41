//! Seeded instance generation with known membership.

use crate::instance::{
    ActionInstance, ApproxRule, BottomedPosetInstance, CutDefault, Cuts, Edge, FamilySeqInstance, GraphBody,
    GraphInstance, Instance, LinearOrderInstance, PosetInstance, PreRealInstance, Presentation, RealSeqInstance,
    RealTarget, Seq, SeqInstance, Tail, TreeInstance, Variant, Q,
};
use crate::problems::{Catalog, Problem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};

pub const MAX_PREFIX: usize = 32;
pub const MAX_UNIVERSE: u64 = 24;
pub const MAX_STAGES: u64 = 128;

/// How instances for one problem are drawn. The problem gives ground truth;
/// the variant picks the description shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorProfile {
    pub problem: Catalog,
    pub variant: Variant,
    pub seed: u64,
    /// Share of trial slots that get non-members, in percent.
    pub non_member_percent: u64,
    /// Latest stage at which a generated event may happen.
    pub stages: u64,
}

impl GeneratorProfile {
    pub fn new(problem: Catalog, variant: Variant, seed: u64, horizon: u64) -> Self {
        GeneratorProfile {
            problem,
            variant,
            seed,
            non_member_percent: 40,
            stages: MAX_STAGES.min(horizon / 2).max(1),
        }
    }

    /// The description shape a problem is generated in by default.
    pub fn default_variant(problem: Catalog) -> Variant {
        match problem {
            Catalog::Fin | Catalog::Conv | Catalog::BddSeq => Variant::Seq,
            Catalog::QPre => Variant::PreReal,
            Catalog::PoTop => Variant::Poset,
            Catalog::HalfTruth | Catalog::Truth => Variant::Family,
            Catalog::DisConn => Variant::Graph(Presentation::Subset),
            Catalog::DisConnFun => Variant::Graph(Presentation::Function),
            Catalog::Orbit => Variant::Action,
            Catalog::NonDense => Variant::LinearOrder,
            Catalog::PoAtom => Variant::BottomedPoset,
            Catalog::Tr2 => Variant::Tree,
        }
    }

    /// Whether slot `k` is a non-member slot. The first `N` slots hold
    /// `floor(N * percent / 100)` non-members.
    pub fn non_member_slot(&self, k: u64) -> bool {
        let p = self.non_member_percent.min(100);
        (k + 1) * p / 100 > k * p / 100
    }

    fn rng(&self, k: u64) -> ChaCha8Rng {
        let mut h = Sha256::new();
        h.update(format!("{}/{}/{}/{}", self.seed, self.problem.key(), self.variant, k).as_bytes());
        ChaCha8Rng::from_seed(h.finalize().into())
    }
}

/// The `k`-th instance of a profile. Membership in `profile.problem` is
/// `!non_member_slot(k)`.
pub fn generate(profile: &GeneratorProfile, k: u64) -> Instance {
    let member = !profile.non_member_slot(k);
    let mut g = Gen {
        rng: profile.rng(k),
        stages: profile.stages,
    };
    let d = g.instance(profile.problem, profile.variant, member);
    debug_assert!(d.validate().is_ok());
    debug_assert_eq!(profile.problem.is_member(&d).ok(), Some(member), "{d:?}");
    d
}

/// All-zero families and edgeless graphs: the instances on which every
/// designated witness can be invalidated separately.
pub fn is_splittable(d: &Instance) -> bool {
    match d {
        Instance::Family(f) => f.is_all_zero(),
        Instance::Graph(GraphInstance {
            body: GraphBody::Finite { vertices, edges },
            ..
        }) => edges.is_empty() && vertices.len() >= 2,
        _ => false,
    }
}

struct Gen {
    rng: ChaCha8Rng,
    stages: u64,
}

impl Gen {
    fn instance(&mut self, problem: Catalog, variant: Variant, member: bool) -> Instance {
        match (problem, variant) {
            (Catalog::Fin, _) => Instance::Seq(self.fin(member)),
            (Catalog::Conv, _) => Instance::Seq(self.conv(member)),
            (Catalog::BddSeq, Variant::RatSeq) => Instance::RatSeq(self.bounded_rats(member)),
            (Catalog::BddSeq, Variant::RealSeq) => Instance::RealSeq(RealSeqInstance {
                values: self.bounded_rats(member),
                approx: self.approx(),
            }),
            (Catalog::BddSeq, _) => Instance::Seq(self.bounded(member)),
            (Catalog::QPre, _) => Instance::PreReal(self.pre_real(member)),
            (Catalog::PoTop, _) => Instance::Poset(self.poset(member)),
            (Catalog::HalfTruth | Catalog::Truth, _) => Instance::Family(self.family(member)),
            (Catalog::DisConn, _) => Instance::Graph(self.graph(Presentation::Subset, member)),
            (Catalog::DisConnFun, _) => Instance::Graph(self.graph(Presentation::Function, member)),
            (Catalog::Orbit, _) => Instance::Action(self.action(member)),
            (Catalog::NonDense, _) => Instance::LinearOrder(LinearOrderInstance { fills: self.cuts(member) }),
            (Catalog::PoAtom, _) => Instance::BottomedPoset(BottomedPosetInstance { columns: self.cuts(member) }),
            (Catalog::Tr2, _) => Instance::Tree(TreeInstance { branches: self.cuts(member) }),
        }
    }

    fn prefix_len(&mut self) -> usize {
        self.rng.random_range(0..=MAX_PREFIX.min(self.stages as usize))
    }

    fn values(&mut self, len: usize, max: u64) -> Vec<u64> {
        (0..len).map(|_| self.rng.random_range(0..=max)).collect()
    }

    fn stage(&mut self) -> u64 {
        self.rng.random_range(0..self.stages)
    }

    fn fin(&mut self, member: bool) -> SeqInstance {
        let len = self.prefix_len();
        let prefix = self.values(len, 4);
        let tail = if member {
            Tail::Const(0)
        } else {
            match self.rng.random_range(0..3) {
                0 => Tail::Const(self.rng.random_range(1..=4)),
                1 => {
                    let n = self.rng.random_range(1..=4);
                    let mut w = self.values(n, 3);
                    let i = self.rng.random_range(0..w.len());
                    w[i] = w[i].max(1);
                    Tail::Periodic(w)
                }
                _ => Tail::Ramp,
            }
        };
        Seq::new(prefix, tail)
    }

    fn conv(&mut self, member: bool) -> SeqInstance {
        let len = self.prefix_len();
        let prefix = self.values(len, 4);
        let tail = if member {
            Tail::Const(self.rng.random_range(0..=4))
        } else if self.rng.random_bool(0.5) {
            let n = self.rng.random_range(2..=4);
            let mut w = self.values(n, 3);
            if w.iter().all(|&v| v == w[0]) {
                w[1] = w[0] + 1;
            }
            Tail::Periodic(w)
        } else {
            Tail::Ramp
        };
        Seq::new(prefix, tail)
    }

    fn bounded(&mut self, member: bool) -> SeqInstance {
        let len = self.prefix_len();
        let prefix = self.values(len, 8);
        let tail = if !member {
            Tail::Ramp
        } else if self.rng.random_bool(0.5) {
            Tail::Const(self.rng.random_range(0..=8))
        } else {
            let n = self.rng.random_range(1..=4);
            Tail::Periodic(self.values(n, 8))
        };
        Seq::new(prefix, tail)
    }

    fn rational(&mut self) -> Q {
        Q::new(self.rng.random_range(-8..=8), self.rng.random_range(1..=4))
    }

    fn bounded_rats(&mut self, member: bool) -> Seq<Q> {
        let len = self.prefix_len();
        let prefix = (0..len).map(|_| self.rational()).collect();
        let tail = if !member {
            Tail::Ramp
        } else if self.rng.random_bool(0.5) {
            Tail::Const(self.rational())
        } else {
            let n = self.rng.random_range(1..=3);
            Tail::Periodic((0..n).map(|_| self.rational()).collect())
        };
        Seq::new(prefix, tail)
    }

    fn approx(&mut self) -> ApproxRule {
        [ApproxRule::Exact, ApproxRule::Below, ApproxRule::Above, ApproxRule::Alternating][self.rng.random_range(0..4)]
    }

    /// Members are small-denominator rationals or square-dyadic sums with
    /// support below 4; non-members are sums with infinite support.
    fn pre_real(&mut self, member: bool) -> PreRealInstance {
        let approx = self.approx();
        let target = if member && self.rng.random_bool(0.5) {
            RealTarget::Rational(self.rational())
        } else {
            let n = self.rng.random_range(0..=4);
            let prefix = self.values(n, 1);
            let tail = if member {
                Tail::Const(0)
            } else {
                match self.rng.random_range(0..3) {
                    0 => Tail::Const(1),
                    1 => Tail::Periodic(vec![0, 1]),
                    _ => Tail::Ramp,
                }
            };
            RealTarget::SquareDyadicSum(Seq::new(prefix, tail))
        };
        PreRealInstance { target, approx }
    }

    fn subset(&mut self, lo: usize, hi: usize) -> Vec<u64> {
        let mut all: Vec<u64> = (0..MAX_UNIVERSE).collect();
        all.shuffle(&mut self.rng);
        all.truncate(self.rng.random_range(lo..=hi));
        all
    }

    fn poset(&mut self, member: bool) -> PosetInstance {
        // a chain with infinitely many records has no bounded universe
        if member && self.rng.random_range(0..4) == 0 {
            return PosetInstance::RecordChain { seq: self.bounded(true) };
        }
        let order = self.subset(0, 8);
        let mut less = Vec::new();
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if self.rng.random_bool(0.3) {
                    less.push((order[i], order[j]));
                }
            }
        }
        let mut p = PosetInstance::finite(order.iter().copied(), less.clone());
        if member && p.top().is_none() {
            let top = match order.last() {
                Some(&t) => t,
                None => {
                    let t = self.rng.random_range(0..MAX_UNIVERSE);
                    return PosetInstance::finite([t], vec![]);
                }
            };
            less.extend(order.iter().filter(|&&a| a != top).map(|&a| (a, top)));
            p = PosetInstance::finite(order.iter().copied(), less);
        } else if !member && p.top().is_some() {
            let fresh = (0..MAX_UNIVERSE).find(|a| !order.contains(a)).expect("at most 8 elements used");
            p = PosetInstance::finite(order.iter().copied().chain([fresh]), less);
        }
        p
    }

    fn spike(&mut self) -> SeqInstance {
        let p = self.stage();
        SeqInstance::spike_value(p as usize, self.rng.random_range(1..=3))
    }

    /// Members keep some column zero; a quarter of them are all zero.
    fn family(&mut self, member: bool) -> FamilySeqInstance {
        if member && self.rng.random_range(0..4) == 0 {
            return FamilySeqInstance::all_zero();
        }
        let cols = self.rng.random_range(1..=6u64);
        let mut f = FamilySeqInstance::with_default(crate::instance::ColumnDefault::NonZeroAt(self.stage()));
        for n in 0..cols {
            let x = self.spike();
            f = f.except(n, x);
        }
        if member {
            let keep = self.rng.random_range(0..=cols);
            f = f.except(keep, SeqInstance::zeros());
        }
        f
    }

    fn cuts(&mut self, member: bool) -> Cuts {
        let cols = self.rng.random_range(1..=6u64);
        let mut exceptions = BTreeMap::new();
        for n in 0..cols {
            exceptions.insert(n, Some(self.stage()));
        }
        if member {
            exceptions.insert(self.rng.random_range(0..=cols), None);
        }
        Cuts {
            exceptions,
            default: CutDefault::At(self.stage()),
        }
    }

    fn graph(&mut self, presentation: Presentation, member: bool) -> GraphInstance {
        let vertices = self.subset(1, 8);
        let mut pairs = Vec::new();
        if !(member && self.rng.random_range(0..4) == 0) {
            for i in 0..vertices.len() {
                for j in i + 1..vertices.len() {
                    if self.rng.random_bool(0.25) {
                        pairs.push((vertices[i], vertices[j]));
                    }
                }
            }
        }
        let mut vertices: BTreeSet<u64> = vertices.into_iter().collect();
        let mut uf = crate::instance::UnionFind::default();
        for &(a, b) in &pairs {
            uf.union(a, b);
        }
        let roots: BTreeSet<u64> = vertices.iter().map(|&v| uf.find(v)).collect();
        if member && roots.len() < 2 {
            let fresh = (0..MAX_UNIVERSE).find(|v| !vertices.contains(v)).expect("at most 8 vertices used");
            vertices.insert(fresh);
        } else if !member {
            let roots: Vec<u64> = roots.into_iter().collect();
            pairs.extend(roots.windows(2).map(|w| (w[0], w[1])));
        }
        let edges = match presentation {
            Presentation::Subset => pairs.into_iter().map(|(a, b)| Edge::new(a, b)).collect(),
            Presentation::Function => {
                let mut ids: Vec<u64> = (0..MAX_UNIVERSE).collect();
                ids.shuffle(&mut self.rng);
                pairs.into_iter().zip(ids).map(|((a, b), id)| Edge::with_id(id, a, b)).collect()
            }
        };
        GraphInstance::finite(presentation, vertices, edges)
    }

    fn action(&mut self, member: bool) -> ActionInstance {
        let carrier = self.subset(1, 8);
        let mut a = ActionInstance::trivial(carrier.iter().copied());
        for id in 0..self.rng.random_range(0..=3) {
            let mut moved = carrier.clone();
            moved.shuffle(&mut self.rng);
            moved.truncate(self.rng.random_range(0..=carrier.len()));
            let cycle = moved.iter().zip(moved.iter().cycle().skip(1)).map(|(&x, &y)| (x, y));
            a = a.with_generator(id, cycle.collect::<Vec<_>>());
        }
        let orbits = a.orbits().len();
        if member && orbits < 2 {
            let fresh = (0..MAX_UNIVERSE).find(|v| !a.carrier.contains(v)).expect("at most 8 points used");
            a.carrier.insert(fresh);
        } else if !member && orbits >= 2 {
            let all: Vec<u64> = a.carrier.iter().copied().collect();
            let cycle = all.iter().zip(all.iter().cycle().skip(1)).map(|(&x, &y)| (x, y));
            let id = a.generators.len() as u64;
            a = a.with_generator(id, cycle.collect::<Vec<_>>());
        }
        a
    }
}
