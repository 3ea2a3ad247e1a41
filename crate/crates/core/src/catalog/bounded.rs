//! Reductions between greatest elements and bounded sequences, and the
//! embeddings among the three bounded-sequence variants.

use crate::coding::{pair, unpair};
use crate::error::Result;
use crate::instance::{
    ApproxRule, Instance, PosetInstance, Q, RealSeqInstance, Seq, SeqInstance, Tail, Value, Variant,
};
use crate::problems::{ceil_abs, Catalog, ProblemRef};
use crate::reduction::Reduction;
use crate::stream::StreamHandle;
use crate::witness::Witness;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Greatest element among the elements admitted so far, maintained
/// incrementally from order queries.
#[derive(Default)]
struct Greatest {
    elements: Vec<u64>,
    top: Option<u64>,
}

impl Greatest {
    fn admit(&mut self, a: u64, leq: &mut impl FnMut(u64, u64) -> Result<bool>) -> Result<()> {
        self.top = match self.top {
            Some(g) if leq(a, g)? => Some(g),
            Some(g) if leq(g, a)? => Some(a),
            Some(_) => None,
            None => {
                let mut all_below = true;
                for &c in &self.elements {
                    if !leq(c, a)? {
                        all_below = false;
                        break;
                    }
                }
                all_below.then_some(a)
            }
        };
        self.elements.push(a);
        Ok(())
    }
}

/// `m_0, ..., m_upto` where `m_s` is the greatest element among the
/// elements below `s`, read from `[a <= b]` queries.
fn greatest_so_far(mut leq: impl FnMut(u64, u64) -> Result<bool>, upto: u64) -> Result<Vec<Option<u64>>> {
    let mut g = Greatest::default();
    let mut out = vec![None];
    for a in 0..upto {
        if leq(a, a)? {
            g.admit(a, &mut leq)?;
        }
        out.push(g.top);
    }
    Ok(out)
}

/// `phi(x)(s) = 0` when `m_{s+1} = m_s` (and, unless `literal`, `m_s`
/// exists), else `s`.
fn top_changes(m: &[Option<u64>], literal: bool) -> Vec<u64> {
    m.windows(2)
        .enumerate()
        .map(|(s, w)| {
            let steady = w[0] == w[1] && (literal || w[0].is_some());
            if steady {
                0
            } else {
                s as u64
            }
        })
        .collect()
}

/// Position after which a poset description admits nothing new, and
/// whether elements keep arriving forever.
fn last_arrival(p: &PosetInstance) -> (u64, bool) {
    match p {
        PosetInstance::Finite { elements, .. } => (elements.iter().copied().max().unwrap_or(0), false),
        PosetInstance::RecordChain { seq } => {
            let (records, finite) = seq.records();
            (records.last().copied().unwrap_or(0), !finite)
        }
    }
}

/// Tracks the greatest element `m_s` of the elements seen before stage
/// `s`; outputs `s` whenever it moves or is missing. The bound `b` is
/// sent back to `m_{b+1}`.
pub struct PoTopToBddSeq {
    /// Drops the "missing" clause, as in the bare construction. Kept to
    /// exhibit the posets without a greatest element it maps to bounded
    /// sequences.
    pub literal: bool,
}

impl Reduction for PoTopToBddSeq {
    fn id(&self) -> String {
        if self.literal {
            "potop_to_bddseq_literal".into()
        } else {
            "potop_to_bddseq".into()
        }
    }

    fn source(&self) -> ProblemRef {
        Catalog::PoTop.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        let p = d.expect_poset()?;
        let (last, endless) = last_arrival(p);
        let len = horizon.max(last + 2);
        let m = greatest_so_far(|a, b| Ok(p.leq(a, b)), len)?;
        let prefix = top_changes(&m, self.literal);
        let tail = if endless || (!self.literal && p.top().is_none()) {
            Tail::Ramp
        } else {
            Tail::Const(0)
        };
        Ok(Instance::Seq(SeqInstance::new(prefix, tail)))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let m = greatest_so_far(|a, b| x.flag(pair(a, b)), len)?;
        Ok(top_changes(&m, self.literal).into_iter().map(Value::Nat).collect())
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(w.expect_nat("n")?))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let b = v.expect_nat("b")?;
        let m = greatest_so_far(|a, c| x.flag(pair(a, c)), b + 1)?;
        // with no greatest element yet the answer is some non-top; 0 keeps
        // the witness well formed
        Ok(Witness::Nat(m[(b + 1) as usize].unwrap_or(0)))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::Poset)
    }
}

/// Each new record of `x` becomes a new top element. The forward map
/// returns the greatest element among the records up to the bound, and the
/// backward map returns the top element's position itself.
pub struct BddSeqToPoTop;

fn is_record(x: &StreamHandle, i: u64) -> Result<bool> {
    let v = x.nat(i)?;
    for t in 0..i {
        if x.nat(t)? >= v {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Reduction for BddSeqToPoTop {
    fn id(&self) -> String {
        "bddseq_to_potop".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::PoTop.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(Instance::Poset(PosetInstance::RecordChain {
            seq: d.expect_seq()?.clone(),
        }))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let x = x.memoized();
        (0..len)
            .map(|i| {
                let (a, b) = unpair(i);
                Ok(Value::bool(a <= b && is_record(&x, a)? && is_record(&x, b)?))
            })
            .collect()
    }

    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let b = w.expect_nat("b")?;
        let x = x.memoized();
        let mut top = 0;
        for t in 0..=b {
            if is_record(&x, t)? {
                top = t;
            }
        }
        Ok(Witness::Nat(top))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::Nat(v.expect_nat("n")?))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::Seq)
    }
}

fn map_seq<T: Clone, U>(x: &Seq<T>, f: impl Fn(&T) -> U, ramp: Tail<U>) -> Seq<U> {
    Seq {
        prefix: x.prefix.iter().map(&f).collect(),
        tail: match &x.tail {
            Tail::Const(c) => Tail::Const(f(c)),
            Tail::Periodic(w) => Tail::Periodic(w.iter().map(&f).collect()),
            Tail::Ramp => ramp,
        },
    }
}

fn rational(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Natural sequences as rational sequences; the bound `b` becomes `b/1`
/// and a rational bound comes back as its floor.
pub struct BddNatToRat;

impl Reduction for BddNatToRat {
    fn id(&self) -> String {
        "bddseq_nat_to_rat".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(Instance::RatSeq(map_seq(d.expect_seq()?, |&v| Q(rational(v)), Tail::Ramp)))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        Ok(Value::Rat(rational(x.nat(i)?)))
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::frac(1u32, w.expect_nat("b")?))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let q = v.expect_rational("k/m")?;
        Ok(Witness::Nat(q.floor().to_integer().to_u64().unwrap_or(0)))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::Seq)
    }
}

/// Rational sequences as sequences of exactly approximated reals; bounds
/// are unchanged.
pub struct BddRatToReal;

impl Reduction for BddRatToReal {
    fn id(&self) -> String {
        "bddseq_rat_to_real".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        match d {
            Instance::RatSeq(x) => Ok(Instance::RealSeq(RealSeqInstance {
                values: x.clone(),
                approx: ApproxRule::Exact,
            })),
            other => Err(crate::error::Error::mismatch("rat_seq", other.variant().to_string())),
        }
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        Ok(Value::Rat(x.rat(unpair(i).0)?))
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        w.expect_rational("k/m")?;
        Ok(w.clone())
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        v.expect_rational("k/m")?;
        Ok(v.clone())
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::RatSeq)
    }
}

/// Real sequences to natural ones: `phi(x)(n) = ceil(|q|)` for the
/// approximation `q` of `x_n` at index 1. A real bound `b` becomes
/// `|m| + 1` for `m = round(2b)`; a natural bound `c` comes back as
/// `c + 1/2`.
pub struct BddRealToNat;

impl Reduction for BddRealToNat {
    fn id(&self) -> String {
        "bddseq_real_to_nat".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::BddSeq.arc()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        let Instance::RealSeq(x) = d else {
            return Err(crate::error::Error::mismatch("real_seq", d.variant().to_string()));
        };
        let delta = x.approx.delta(1);
        let f = |q: &Q| ceil_abs(&(&q.0 + &delta));
        let mut image = map_seq(&x.values, f, Tail::Ramp);
        if x.values.tail == Tail::Ramp {
            let len = horizon.max(x.values.tail_start() + 1);
            image.prefix = (0..len).map(|n| ceil_abs(&x.approx_at(n, 1))).collect();
        }
        Ok(Instance::Seq(image))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        Ok(Value::Nat(ceil_abs(&x.rat(pair(i, 1))?)))
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let b = w.expect_rational("k/m")?;
        let m = (b * rational(2)).round().to_integer();
        Ok(Witness::Nat(m.abs().to_u64().unwrap_or(u64::MAX - 1) + 1))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let c = v.expect_nat("b")?;
        Ok(Witness::frac(BigUint::from(2u32), BigInt::from(c) * 2 + 1))
    }

    fn input_variant(&self) -> Option<Variant> {
        Some(Variant::RealSeq)
    }
}
