//! Reductions built uniformly from a Π⁰₁ family or a Σ⁰₂ matrix: the
//! staged machines into `Fin` and `BddSeq`, the demi-reduction into `Fin`,
//! the column encodings into `Truth` and `HalfTruth`, and lifts through an
//! amalgamation rule.

use crate::error::{Error, Result};
use crate::family::{BinaryMatrix, Family, Matrix};
use crate::instance::{ColumnDefault, FamilySeqInstance, Instance, SeqInstance, Tail, Value, Variant};
use crate::problems::{Catalog, ProblemRef};
use crate::reduction::{Reduction, ReductionRef};
use crate::stream::StreamHandle;
use crate::subobject::{half_problem, witnessed_union};
use crate::witness::Witness;
use std::sync::Arc;

/// What the staged machine writes when it refutes index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emission {
    /// `1`, for `Fin` targets.
    One,
    /// `n`, for `BddSeq` targets.
    Index,
}

impl Emission {
    fn value(self, n: u64) -> u64 {
        match self {
            Emission::One => 1,
            Emission::Index => n,
        }
    }
}

/// Waits on index `n`, writing 0, until the watcher for `A_n` reports a
/// refuting stage; then writes one emission and moves on to `n + 1` from
/// the next stage. A newly entered watcher first catches up on all stages
/// so far.
pub struct StagedMachine {
    family: Family,
    emission: Emission,
    x: StreamHandle,
    n: u64,
    /// `entered[k]` is the stage at which waiting on `k` began.
    entered: Vec<u64>,
    /// Next stage the current watcher has not checked.
    scan: u64,
    output: Vec<u64>,
}

impl StagedMachine {
    pub fn new(family: Family, emission: Emission, x: &StreamHandle) -> Self {
        StagedMachine {
            family,
            emission,
            x: x.memoized(),
            n: 0,
            entered: vec![0],
            scan: 0,
            output: Vec::new(),
        }
    }

    /// Runs one stage.
    pub fn step(&mut self) -> Result<()> {
        let s = self.output.len() as u64;
        let mut refuted = false;
        while self.scan <= s {
            if self.family.check(self.n, &self.x, self.scan)? {
                refuted = true;
                break;
            }
            self.scan += 1;
        }
        if refuted {
            self.output.push(self.emission.value(self.n));
            self.n += 1;
            self.entered.push(s + 1);
            self.scan = 0;
        } else {
            self.output.push(0);
        }
        Ok(())
    }

    pub fn run_to(&mut self, stages: u64) -> Result<()> {
        while (self.output.len() as u64) < stages {
            self.step()?;
        }
        Ok(())
    }

    /// The index being waited on at the next stage.
    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn output(&self) -> &[u64] {
        &self.output
    }

    /// Runs until waiting on `n` begins; returns that stage.
    pub fn stage_entering(&mut self, n: u64) -> Result<u64> {
        while self.n < n {
            self.step()?;
        }
        Ok(self.entered[n as usize])
    }
}

/// The machine's output computed from a description with the family's
/// refutation oracle. Exact when some index is never refuted; otherwise
/// exact up to `horizon` and then continued by a tail of the same class.
fn machine_image(family: &Family, emission: Emission, d: &Instance, horizon: u64) -> Result<Instance> {
    let mut out = Vec::new();
    let mut n = 0;
    loop {
        let start = out.len() as u64;
        match family.refutation_stage(n, d)? {
            None => return Ok(Instance::Seq(SeqInstance::new(out, Tail::Const(0)))),
            Some(r) => {
                let end = start.max(r);
                out.resize(end as usize, 0);
                out.push(emission.value(n));
            }
        }
        n += 1;
        if out.len() as u64 >= horizon {
            let tail = match emission {
                Emission::One => Tail::Const(1),
                Emission::Index => Tail::Ramp,
            };
            return Ok(Instance::Seq(SeqInstance::new(out, tail)));
        }
    }
}

/// `⊎ A_n -> Fin` for a pairwise disjoint family.
pub struct UniqueToFin {
    pub family: Family,
}

pub fn unique_to_fin(family: Family) -> ReductionRef {
    Arc::new(UniqueToFin { family })
}

impl Reduction for UniqueToFin {
    fn id(&self) -> String {
        format!("unique_to_fin({})", self.family)
    }

    fn source(&self) -> ProblemRef {
        witnessed_union(self.family.clone())
    }

    fn target(&self) -> ProblemRef {
        Catalog::Fin.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        machine_image(&self.family, Emission::One, d, horizon)
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let mut m = StagedMachine::new(self.family.clone(), Emission::One, x);
        m.run_to(len)?;
        Ok(m.output().iter().map(|&v| Value::Nat(v)).collect())
    }

    /// The stage at which waiting on `n` begins.
    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let n = w.expect_nat("n")?;
        Ok(Witness::Nat(StagedMachine::new(self.family.clone(), Emission::One, x).stage_entering(n)?))
    }

    /// The index waited on at stage `s`.
    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let s = v.expect_nat("n")?;
        let mut m = StagedMachine::new(self.family.clone(), Emission::One, x);
        m.run_to(s)?;
        Ok(Witness::Nat(m.index()))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(self.family.variant())
    }
}

/// `⊎ A_n -> BddSeq` for an increasing family.
pub struct IncreasingToBddSeq {
    pub family: Family,
}

pub fn increasing_to_bddseq(family: Family) -> ReductionRef {
    Arc::new(IncreasingToBddSeq { family })
}

impl Reduction for IncreasingToBddSeq {
    fn id(&self) -> String {
        format!("increasing_to_bddseq({})", self.family)
    }

    fn source(&self) -> ProblemRef {
        witnessed_union(self.family.clone())
    }

    fn target(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        machine_image(&self.family, Emission::Index, d, horizon)
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let mut m = StagedMachine::new(self.family.clone(), Emission::Index, x);
        m.run_to(len)?;
        Ok(m.output().iter().map(|&v| Value::Nat(v)).collect())
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(w.expect_nat("n")?))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(v.expect_nat("b")?.saturating_add(1)))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(self.family.variant())
    }
}

/// Tracks `n_s`, the largest `n <= s` such that every `k <= n` has some
/// `m <= s - n` with `not theta(k, m, x)`.
struct Frontier {
    /// Least refuting `m` found for each `k`, or the next `m` to try.
    refuted: Vec<std::result::Result<u64, u64>>,
    /// `n_s + 1` for each stage run so far.
    levels: Vec<u64>,
}

impl Frontier {
    fn new() -> Self {
        Frontier {
            refuted: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Runs stage `s = levels.len()`, learning refutations through `m <= s`.
    fn step(&mut self, mut refutes: impl FnMut(u64, u64) -> Result<bool>) -> Result<()> {
        let s = self.levels.len() as u64;
        self.refuted.push(Err(0));
        for (k, slot) in self.refuted.iter_mut().enumerate() {
            while let Err(m) = *slot {
                if m > s {
                    break;
                }
                *slot = if refutes(k as u64, m)? { Ok(m) } else { Err(m + 1) };
            }
        }
        let mut worst = 0;
        let mut level = 0;
        for (n, slot) in self.refuted.iter().enumerate() {
            match slot {
                Ok(m) => worst = worst.max(*m),
                Err(_) => break,
            }
            if worst + n as u64 <= s {
                level = n as u64 + 1;
            }
        }
        self.levels.push(level);
        Ok(())
    }

    fn output(&self) -> Vec<u64> {
        let mut prev = 0;
        self.levels
            .iter()
            .map(|&l| {
                let up = (l > prev) as u64;
                prev = l;
                up
            })
            .collect()
    }
}

/// `A -> Fin` without a forward map, for `A = exists n forall m theta`.
/// `phi(x)(s) = 1` exactly when `n_s` grows; the `Fin` witness `s` comes
/// back as `n_s + 1`.
pub struct DemiToFin {
    pub matrix: Matrix,
}

pub fn demi_to_fin(matrix: Matrix) -> ReductionRef {
    Arc::new(DemiToFin { matrix })
}

impl DemiToFin {
    fn family(&self) -> Family {
        Family::Matrix(self.matrix)
    }

    fn run(&self, x: &StreamHandle, stages: u64) -> Result<Frontier> {
        let x = x.memoized();
        let mut f = Frontier::new();
        while (f.levels.len() as u64) < stages {
            f.step(|k, m| Ok(!self.matrix.eval(k, m, &x)?))?;
        }
        Ok(f)
    }
}

impl Reduction for DemiToFin {
    fn id(&self) -> String {
        format!("demi_to_fin({})", self.family())
    }

    fn source(&self) -> ProblemRef {
        witnessed_union(self.family())
    }

    fn target(&self) -> ProblemRef {
        Catalog::Fin.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        let family = self.family();
        let least = family.least_member(d)?;
        let mut stages = horizon;
        if let Some(k) = least {
            let mut worst = 0;
            for j in 0..k {
                worst = worst.max(family.refutation_stage(j, d)?.expect("below the least member"));
            }
            stages = stages.max(worst + k + 1);
        }
        let mut f = Frontier::new();
        while (f.levels.len() as u64) < stages {
            f.step(|k, m| Ok(family.refutation_stage(k, d)? == Some(m)))?;
        }
        let tail = if least.is_some() { Tail::Const(0) } else { Tail::Const(1) };
        Ok(Instance::Seq(SeqInstance::new(f.output(), tail)))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        Ok(self.run(x, len)?.output().into_iter().map(Value::Nat).collect())
    }

    fn forward(&self, _w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Err(Error::NoForwardMap(self.id()))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let s = v.expect_nat("n")?;
        let f = self.run(x, s + 1)?;
        Ok(Witness::Nat(f.levels[s as usize]))
    }

    fn is_demi(&self) -> bool {
        true
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::Seq)
    }
}

/// Column `n` of the image is 0 until the watcher for `A_n` refutes, then 1.
fn column_image(family: &Family, d: &Instance) -> Instance {
    Instance::Family(FamilySeqInstance::with_default(ColumnDefault::Refutation {
        family: family.clone(),
        base: Box::new(d.clone()),
    }))
}

fn column_prefix(family: &Family, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
    let x = x.memoized();
    (0..len)
        .map(|i| {
            let (n, k) = crate::coding::unpair(i);
            Ok(Value::bool(family.watch(n, &x, k)?.is_some()))
        })
        .collect()
}

/// `⊎ A_n -> Truth`; witnesses unchanged.
pub struct FamilyToTruth {
    pub family: Family,
}

pub fn family_to_truth(family: Family) -> ReductionRef {
    Arc::new(FamilyToTruth { family })
}

impl Reduction for FamilyToTruth {
    fn id(&self) -> String {
        format!("family_to_truth({})", self.family)
    }

    fn source(&self) -> ProblemRef {
        witnessed_union(self.family.clone())
    }

    fn target(&self) -> ProblemRef {
        Catalog::Truth.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        self.family.refutation_stage(0, d)?;
        Ok(column_image(&self.family, d))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        column_prefix(&self.family, x, len)
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(w.expect_nat("n")?))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(v.expect_nat("n")?))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(self.family.variant())
    }
}

/// `Half(exists n. x in A_n) -> HalfTruth` by the same column encoding;
/// witness pairs unchanged.
pub struct HalfOf {
    pub family: Family,
}

pub fn half_of(family: Family) -> ReductionRef {
    Arc::new(HalfOf { family })
}

impl Reduction for HalfOf {
    fn id(&self) -> String {
        format!("half_of({})", self.family)
    }

    fn source(&self) -> ProblemRef {
        half_problem(self.family.clone())
    }

    fn target(&self) -> ProblemRef {
        Catalog::HalfTruth.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        self.family.refutation_stage(0, d)?;
        Ok(column_image(&self.family, d))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        column_prefix(&self.family, x, len)
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = w.expect_pair("[a,b]")?;
        Ok(Witness::pair(a, b))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = v.expect_pair("[a,b]")?;
        Ok(Witness::pair(a, b))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(self.family.variant())
    }
}

/// A rule merging a list of candidate witnesses into one that is valid
/// whenever some candidate is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Amalgamator {
    /// `Fin`: the largest threshold.
    FinMax,
    /// `BddSeq` over naturals: the largest bound.
    BoundMax,
}

impl Amalgamator {
    pub fn problem(self) -> Catalog {
        match self {
            Amalgamator::FinMax => Catalog::Fin,
            Amalgamator::BoundMax => Catalog::BddSeq,
        }
    }

    /// The family whose union is the problem, witness for witness.
    pub fn family(self) -> Family {
        match self {
            Amalgamator::FinMax => Family::FinThreshold,
            Amalgamator::BoundMax => Family::Matrix(Matrix::BoundedBy),
        }
    }

    /// Largest natural among the candidates; ill-formed candidates are
    /// skipped.
    pub fn merge(self, _x: &StreamHandle, candidates: &[Witness]) -> Result<Witness> {
        candidates
            .iter()
            .filter_map(Witness::as_nat)
            .max()
            .map(Witness::Nat)
            .ok_or_else(|| Error::SchemaMismatch {
                schema: "n".into(),
                witness: format!("{candidates:?}"),
            })
    }
}

/// `B -> Half(psi_B)`: the identity on instances, `a -> (a, a)` forward,
/// and the amalgamation of `(a, b)` backward.
pub struct AmalgamatedLift {
    pub rule: Amalgamator,
}

pub fn amalgamated_lift(rule: Amalgamator) -> ReductionRef {
    Arc::new(AmalgamatedLift { rule })
}

impl Reduction for AmalgamatedLift {
    fn id(&self) -> String {
        format!("amalgamated_lift({})", self.rule.problem().key())
    }

    fn source(&self) -> ProblemRef {
        self.rule.problem().arc()
    }

    fn target(&self) -> ProblemRef {
        half_problem(self.rule.family())
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        d.expect_seq()?;
        Ok(d.clone())
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        x.get(i)
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let a = w.expect_nat("n")?;
        Ok(Witness::pair(a, a))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let (a, b) = v.expect_pair("[a,b]")?;
        self.rule.merge(x, &[Witness::Nat(a), Witness::Nat(b)])
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::Seq)
    }
}

/// A decomposition into pairwise disjoint pieces by least witness, with
/// the map from any witness of `exists n forall m >= n. f(m, x) = 1` to
/// the least one.
pub struct Normalizer {
    pub matrix: BinaryMatrix,
}

pub fn uw_normalize(matrix: BinaryMatrix) -> Normalizer {
    Normalizer { matrix }
}

impl Normalizer {
    pub fn family(&self) -> Family {
        Family::Normalized(self.matrix)
    }

    /// The least `n0 <= n` with `f(m, x) = 1` for all `n0 <= m < n`.
    pub fn minimize(&self, n: u64, x: &StreamHandle) -> Result<u64> {
        let mut n0 = n;
        while n0 > 0 && self.matrix.eval(n0 - 1, x)? {
            n0 -= 1;
        }
        Ok(n0)
    }
}

/// Whether at most one piece holds on each instance, checked with the
/// oracle for indices up to `bound`.
pub fn disjoint_on(family: &Family, pool: &[Instance], bound: u64) -> Result<bool> {
    for d in pool {
        let mut members = 0;
        for n in 0..=bound {
            members += family.holds(n, d)? as u32;
        }
        if members > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `A_n ⊆ A_{n+1}` on each instance for indices below `bound`.
pub fn increasing_on(family: &Family, pool: &[Instance], bound: u64) -> Result<bool> {
    for d in pool {
        for n in 0..bound {
            if family.holds(n, d)? && !family.holds(n + 1, d)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
