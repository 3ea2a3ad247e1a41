//! Witnessed problems: an underlying set of points together with a witness
//! relation, decided exactly on finite descriptions.

use crate::coding::Bits;
use crate::error::{Error, Result};
use crate::instance::{Instance, Presentation, Variant};
use crate::witness::Witness;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

pub trait Problem: Send + Sync {
    fn id(&self) -> String;

    fn accepts(&self, v: Variant) -> bool;

    /// Shape of witness tokens, for messages.
    fn schema(&self) -> String;

    fn is_member(&self, d: &Instance) -> Result<bool>;

    /// Whether `w` certifies `d`. A token of the wrong shape is an error.
    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool>;

    /// All valid witnesses whose components are at most `bound`, sorted and
    /// without duplicates.
    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>>;

    fn check_variant(&self, d: &Instance) -> Result<()> {
        if self.accepts(d.variant()) {
            Ok(())
        } else {
            Err(Error::mismatch(self.id(), d.variant().to_string()))
        }
    }
}

pub type ProblemRef = Arc<dyn Problem>;

/// The catalog of named problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Catalog {
    /// Eventually zero sequences; witness `n` with `x(m) = 0` for `m >= n`.
    Fin,
    /// Eventually constant sequences; witness `s` with `x(t) = x(s)` for `t >= s`.
    Conv,
    /// Rational pre-reals; witness `k/m` equal to the limit.
    QPre,
    /// Bounded sequences of naturals, rationals or pre-reals; witness a bound.
    BddSeq,
    /// Posets with a greatest element; witness that element.
    PoTop,
    /// Families with a zero column; witness `(n,m)` with column `n` or `m` zero.
    HalfTruth,
    /// Families with a zero column; witness such a column.
    Truth,
    /// Disconnected graphs, subset presentation; witness two unconnected vertices.
    DisConn,
    /// Disconnected graphs, function presentation.
    DisConnFun,
    /// Actions with at least two orbits; witness points in different orbits.
    Orbit,
    /// Non-dense linear orders; witness `a < b` with nothing between.
    NonDense,
    /// Bottomed posets with an atom; witness an atom.
    PoAtom,
    /// Binary trees with two infinite paths; witness two incomparable extendible nodes.
    Tr2,
}

impl Catalog {
    pub const ALL: [Catalog; 13] = [
        Catalog::Fin,
        Catalog::Conv,
        Catalog::QPre,
        Catalog::BddSeq,
        Catalog::PoTop,
        Catalog::HalfTruth,
        Catalog::Truth,
        Catalog::DisConn,
        Catalog::DisConnFun,
        Catalog::Orbit,
        Catalog::NonDense,
        Catalog::PoAtom,
        Catalog::Tr2,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Catalog::Fin => "fin",
            Catalog::Conv => "conv",
            Catalog::QPre => "qpre",
            Catalog::BddSeq => "bddseq",
            Catalog::PoTop => "potop",
            Catalog::HalfTruth => "halftruth",
            Catalog::Truth => "truth",
            Catalog::DisConn => "disconn",
            Catalog::DisConnFun => "disconn_fun",
            Catalog::Orbit => "orbit",
            Catalog::NonDense => "nondense",
            Catalog::PoAtom => "poatom",
            Catalog::Tr2 => "tr2",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Catalog::Fin => "Fin",
            Catalog::Conv => "Conv",
            Catalog::QPre => "Q_pre",
            Catalog::BddSeq => "BddSeq",
            Catalog::PoTop => "PO_top",
            Catalog::HalfTruth => "HalfTruth",
            Catalog::Truth => "Truth",
            Catalog::DisConn => "DisConn",
            Catalog::DisConnFun => "DisConn_fun",
            Catalog::Orbit => "Orbit>=2",
            Catalog::NonDense => "NonDense",
            Catalog::PoAtom => "PO_atom",
            Catalog::Tr2 => "Tr2(>=2)",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Catalog::Fin => "eventually zero sequences",
            Catalog::Conv => "eventually constant sequences",
            Catalog::QPre => "pre-reals with a rational limit",
            Catalog::BddSeq => "bounded sequences over naturals, rationals or pre-reals",
            Catalog::PoTop => "countable posets with a greatest element",
            Catalog::HalfTruth => "families with a zero column, witnessed by a pair",
            Catalog::Truth => "families with a zero column",
            Catalog::DisConn => "disconnected graphs (edge sets)",
            Catalog::DisConnFun => "disconnected graphs (edge identities)",
            Catalog::Orbit => "group actions with at least two orbits",
            Catalog::NonDense => "non-dense linear orders",
            Catalog::PoAtom => "bottomed posets with an atom",
            Catalog::Tr2 => "binary trees with at least two infinite paths",
        }
    }

    pub fn parse(s: &str) -> Result<Catalog> {
        Catalog::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "problem",
                name: s.to_string(),
            })
    }

    pub fn arc(self) -> ProblemRef {
        Arc::new(self)
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

fn nats_from(least: Option<u64>, bound: u64) -> Vec<Witness> {
    least.map_or_else(Vec::new, |l| (l..=bound).map(Witness::Nat).collect())
}

fn pairs_where(bound: u64, mut ok: impl FnMut(u64, u64) -> Result<bool>) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound {
            if ok(a, b)? {
                out.push(Witness::pair(a, b));
            }
        }
    }
    Ok(out)
}

/// Fraction tokens `k/m` with `1 <= m <= bound`, `|k| <= bound`, satisfying `ok`.
fn fractions_where(bound: u64, ok: impl Fn(&BigRational) -> bool) -> Vec<Witness> {
    let b = bound as i64;
    let mut out = Vec::new();
    for m in 1..=b {
        for k in -b..=b {
            if ok(&BigRational::new(BigInt::from(k), BigInt::from(m))) {
                out.push(Witness::frac(BigUint::from(m as u64), BigInt::from(k)));
            }
        }
    }
    out.sort();
    out
}

fn expect_bits_pair(w: &Witness) -> Result<(&Bits, &Bits)> {
    w.as_bits_pair().ok_or_else(|| w.schema_error("[b:..,b:..]"))
}

impl Problem for Catalog {
    fn id(&self) -> String {
        self.key().to_string()
    }

    fn accepts(&self, v: Variant) -> bool {
        match self {
            Catalog::Fin | Catalog::Conv => v == Variant::Seq,
            Catalog::QPre => v == Variant::PreReal,
            Catalog::BddSeq => matches!(v, Variant::Seq | Variant::RatSeq | Variant::RealSeq),
            Catalog::PoTop => v == Variant::Poset,
            Catalog::HalfTruth | Catalog::Truth => v == Variant::Family,
            Catalog::DisConn => v == Variant::Graph(Presentation::Subset),
            Catalog::DisConnFun => v == Variant::Graph(Presentation::Function),
            Catalog::Orbit => v == Variant::Action,
            Catalog::NonDense => v == Variant::LinearOrder,
            Catalog::PoAtom => v == Variant::BottomedPoset,
            Catalog::Tr2 => v == Variant::Tree,
        }
    }

    fn schema(&self) -> String {
        match self {
            Catalog::Fin | Catalog::Conv | Catalog::PoTop | Catalog::Truth | Catalog::PoAtom => "n",
            Catalog::QPre => "k/m",
            Catalog::BddSeq => "b (naturals) or k/m (rationals, pre-reals)",
            Catalog::HalfTruth | Catalog::DisConn | Catalog::DisConnFun | Catalog::Orbit | Catalog::NonDense => {
                "[a,b]"
            }
            Catalog::Tr2 => "[b:sigma,b:tau]",
        }
        .to_string()
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        self.check_variant(d)?;
        match (self, d) {
            (Catalog::Fin, Instance::Seq(x)) => Ok(x.least_zero_tail().is_some()),
            (Catalog::Conv, Instance::Seq(x)) => Ok(x.convergence_point().is_some()),
            (Catalog::QPre, Instance::PreReal(x)) => Ok(x.exact_value().is_some()),
            (Catalog::BddSeq, Instance::Seq(x)) => Ok(x.max_value().is_some()),
            (Catalog::BddSeq, Instance::RatSeq(x)) => Ok(x.abs_sup().is_some()),
            (Catalog::BddSeq, Instance::RealSeq(x)) => Ok(x.values.abs_sup().is_some()),
            (Catalog::PoTop, Instance::Poset(p)) => Ok(p.top().is_some()),
            (Catalog::HalfTruth | Catalog::Truth, Instance::Family(f)) => Ok(f.cuts().least_uncut()?.is_some()),
            (Catalog::DisConn | Catalog::DisConnFun, Instance::Graph(g)) => g.is_disconnected(),
            (Catalog::Orbit, Instance::Action(a)) => Ok(a.orbits().len() >= 2),
            (Catalog::NonDense, Instance::LinearOrder(l)) => l.is_non_dense(),
            (Catalog::PoAtom, Instance::BottomedPoset(p)) => p.has_atom(),
            (Catalog::Tr2, Instance::Tree(t)) => t.has_two_paths(),
            _ => unreachable!("variant checked above"),
        }
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        self.check_variant(d)?;
        let schema = self.schema();
        match (self, d) {
            (Catalog::Fin, Instance::Seq(x)) => {
                let n = w.expect_nat(&schema)?;
                Ok(x.least_zero_tail().is_some_and(|l| n >= l))
            }
            (Catalog::Conv, Instance::Seq(x)) => {
                let n = w.expect_nat(&schema)?;
                Ok(x.convergence_point().is_some_and(|c| n >= c))
            }
            (Catalog::QPre, Instance::PreReal(x)) => {
                let q = w.expect_rational(&schema)?;
                Ok(x.exact_value().is_some_and(|v| v == q))
            }
            (Catalog::BddSeq, Instance::Seq(x)) => {
                let b = w.expect_nat(&schema)?;
                Ok(x.max_value().is_some_and(|m| m <= b))
            }
            (Catalog::BddSeq, Instance::RatSeq(x)) => {
                let b = w.expect_rational(&schema)?;
                Ok(x.abs_sup().is_some_and(|s| s <= b))
            }
            (Catalog::BddSeq, Instance::RealSeq(x)) => {
                let b = w.expect_rational(&schema)?;
                Ok(x.values.abs_sup().is_some_and(|s| s <= b))
            }
            (Catalog::PoTop, Instance::Poset(p)) => Ok(p.top() == Some(w.expect_nat(&schema)?)),
            (Catalog::Truth, Instance::Family(f)) => f.cuts().is_uncut(w.expect_nat(&schema)?),
            (Catalog::HalfTruth, Instance::Family(f)) => {
                let (n, m) = w.expect_pair(&schema)?;
                let cuts = f.cuts();
                Ok(cuts.is_uncut(n)? || cuts.is_uncut(m)?)
            }
            (Catalog::DisConn | Catalog::DisConnFun, Instance::Graph(g)) => {
                let (a, b) = w.expect_pair(&schema)?;
                Ok(g.has_vertex(a)? && g.has_vertex(b)? && !g.connected(a, b)?)
            }
            (Catalog::Orbit, Instance::Action(act)) => {
                let (a, b) = w.expect_pair(&schema)?;
                Ok(act.carrier.contains(&a) && act.carrier.contains(&b) && !act.same_orbit(a, b))
            }
            (Catalog::NonDense, Instance::LinearOrder(l)) => {
                let (a, b) = w.expect_pair(&schema)?;
                l.is_gap(a, b)
            }
            (Catalog::PoAtom, Instance::BottomedPoset(p)) => p.is_atom(w.expect_nat(&schema)?),
            (Catalog::Tr2, Instance::Tree(t)) => {
                let (s, u) = expect_bits_pair(w)?;
                Ok(t.is_extendible(s)? && t.is_extendible(u)? && !s.comparable(u))
            }
            _ => unreachable!("variant checked above"),
        }
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        self.check_variant(d)?;
        match (self, d) {
            (Catalog::Fin, Instance::Seq(x)) => Ok(nats_from(x.least_zero_tail(), bound)),
            (Catalog::Conv, Instance::Seq(x)) => Ok(nats_from(x.convergence_point(), bound)),
            (Catalog::QPre, Instance::PreReal(x)) => {
                let Some(v) = x.exact_value() else {
                    return Ok(Vec::new());
                };
                let (p, q) = (v.numer().clone(), v.denom().clone());
                let mut out = Vec::new();
                let mut m = q.clone();
                while m <= BigInt::from(bound) {
                    let k = &p * &m / &q;
                    if k.abs() <= BigInt::from(bound) {
                        out.push(Witness::frac(m.to_biguint().expect("positive"), k));
                    }
                    m += &q;
                }
                out.sort();
                Ok(out)
            }
            (Catalog::BddSeq, Instance::Seq(x)) => Ok(nats_from(x.max_value(), bound)),
            (Catalog::BddSeq, Instance::RatSeq(_) | Instance::RealSeq(_)) => {
                let sup = match d {
                    Instance::RatSeq(x) => x.abs_sup(),
                    Instance::RealSeq(x) => x.values.abs_sup(),
                    _ => unreachable!(),
                };
                Ok(sup.map_or_else(Vec::new, |s| fractions_where(bound, |q| *q >= s)))
            }
            (Catalog::PoTop, Instance::Poset(p)) => {
                Ok(p.top().filter(|&t| t <= bound).map(Witness::Nat).into_iter().collect())
            }
            (Catalog::Truth, Instance::Family(f)) => {
                let cuts = f.cuts();
                let mut out = Vec::new();
                for n in 0..=bound {
                    if cuts.is_uncut(n)? {
                        out.push(Witness::Nat(n));
                    }
                }
                Ok(out)
            }
            (Catalog::HalfTruth, Instance::Family(f)) => {
                let cuts = f.cuts();
                let zero: Vec<bool> = (0..=bound).map(|n| cuts.is_uncut(n)).collect::<Result<_>>()?;
                pairs_where(bound, |a, b| Ok(zero[a as usize] || zero[b as usize]))
            }
            (Catalog::DisConn | Catalog::DisConnFun, Instance::Graph(g)) => {
                let verts: Vec<u64> = (0..=bound).filter_map(|v| g.has_vertex(v).map(|h| h.then_some(v)).transpose()).collect::<Result<_>>()?;
                let mut out = Vec::new();
                for &a in &verts {
                    for &b in &verts {
                        if !g.connected(a, b)? {
                            out.push(Witness::pair(a, b));
                        }
                    }
                }
                Ok(out)
            }
            (Catalog::Orbit, Instance::Action(act)) => {
                let orbits = act.orbits();
                let root = |a: u64| orbits.iter().find(|(_, o)| o.contains(&a)).map(|(r, _)| *r);
                let pts: Vec<u64> = act.carrier.range(..=bound).copied().collect();
                let mut out = Vec::new();
                for &a in &pts {
                    for &b in &pts {
                        if root(a) != root(b) {
                            out.push(Witness::pair(a, b));
                        }
                    }
                }
                Ok(out)
            }
            (Catalog::NonDense, Instance::LinearOrder(l)) => pairs_where(bound, |a, b| l.is_gap(a, b)),
            (Catalog::PoAtom, Instance::BottomedPoset(p)) => {
                let mut out = Vec::new();
                for a in 0..=bound {
                    if p.is_atom(a)? {
                        out.push(Witness::Nat(a));
                    }
                }
                Ok(out)
            }
            (Catalog::Tr2, Instance::Tree(t)) => {
                let nodes = t.extendible_upto(bound.min(62) as usize)?;
                let mut out = Vec::new();
                for s in &nodes {
                    for u in &nodes {
                        if !s.comparable(u) {
                            out.push(Witness::tuple2(Witness::Bits(s.clone()), Witness::Bits(u.clone())));
                        }
                    }
                }
                out.sort();
                Ok(out)
            }
            _ => unreachable!("variant checked above"),
        }
    }
}

/// Natural upper bound `ceil(|q|)`.
pub fn ceil_abs(q: &BigRational) -> u64 {
    let c = q.abs().ceil().to_integer();
    if c.is_zero() {
        0
    } else {
        c.to_u64().unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::*;

    fn seq(prefix: &[u64], tail: Tail<u64>) -> Instance {
        Instance::seq(prefix.to_vec(), tail)
    }

    #[test]
    fn membership_examples() {
        assert!(Catalog::Fin.is_member(&seq(&[1], Tail::Const(0))).unwrap());
        assert!(!Catalog::BddSeq.is_member(&seq(&[], Tail::Ramp)).unwrap());
        let g = Instance::Graph(GraphInstance::finite(Presentation::Subset, [0, 1, 2], vec![Edge::new(0, 1)]));
        assert!(Catalog::DisConn.is_member(&g).unwrap());
    }

    #[test]
    fn witness_examples() {
        let x = seq(&[3, 3, 5], Tail::Const(5));
        assert!(Catalog::Conv.is_valid(&x, &Witness::Nat(2)).unwrap());
        assert!(!Catalog::Conv.is_valid(&x, &Witness::Nat(1)).unwrap());
        let mut cuts = Cuts::never();
        cuts.exceptions.insert(1, None);
        let t = Instance::Tree(TreeInstance { branches: cuts });
        let w = Witness::tuple2(Witness::Bits(Bits::zeros(2)), Witness::Bits(Bits::branch(1, 1)));
        assert!(Catalog::Tr2.is_valid(&t, &w).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let x = seq(&[1], Tail::Const(0));
        let nats = |v: &[u64]| v.iter().map(|&n| Witness::Nat(n)).collect::<Vec<_>>();
        assert_eq!(Catalog::Fin.witnesses_upto(&x, 3).unwrap(), nats(&[1, 2, 3]));
        let f = Instance::Family(FamilySeqInstance::all_zero().except(0, SeqInstance::spike(2)));
        assert_eq!(Catalog::Truth.witnesses_upto(&f, 2).unwrap(), nats(&[1, 2]));
        assert_eq!(
            Catalog::HalfTruth.witnesses_upto(&f, 1).unwrap(),
            vec![Witness::pair(0, 1), Witness::pair(1, 0), Witness::pair(1, 1)]
        );
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let x = seq(&[1], Tail::Const(0));
        assert!(matches!(
            Catalog::Fin.is_valid(&x, &Witness::pair(1, 2)),
            Err(Error::SchemaMismatch { .. })
        ));
        assert!(matches!(
            Catalog::Truth.is_member(&x),
            Err(Error::VariantMismatch { .. })
        ));
    }

    #[test]
    fn qpre_witnesses_include_reducible_fractions() {
        let x = Instance::PreReal(PreRealInstance::rational(Q::new(1, 2), ApproxRule::Below));
        let ws = Catalog::QPre.witnesses_upto(&x, 4).unwrap();
        assert_eq!(ws, vec![Witness::frac(2u32, 1), Witness::frac(4u32, 2)]);
    }

    #[test]
    fn potop_has_at_most_one_witness() {
        let p = Instance::Poset(PosetInstance::finite([3, 5], vec![(3, 5)]));
        assert_eq!(Catalog::PoTop.witnesses_upto(&p, 16).unwrap(), vec![Witness::Nat(5)]);
    }
}
