//! Levin reductions `(phi, r_-, r_+)` and the operations that combine them.

use crate::error::{Error, Result};
use crate::instance::{Instance, Value, Variant};
use crate::problems::ProblemRef;
use crate::stream::StreamHandle;
use crate::subobject::Coproduct;
use crate::witness::Witness;
use std::sync::Arc;

/// A reduction from `source` to `target`.
///
/// `phi` is given at two levels: [`Reduction::image`] maps a description to
/// a description of the image point, and [`Reduction::image_at`] /
/// [`Reduction::image_prefix`] compute the image stream from queries on the
/// source stream. Implementations provide at least one of the two stream
/// methods. The witness maps see the instance only through its stream;
/// `backward` receives the source stream, never the image stream.
pub trait Reduction: Send + Sync {
    fn id(&self) -> String;

    fn source(&self) -> ProblemRef;

    fn target(&self) -> ProblemRef;

    /// Description of `phi(d)`. Images that are not finitely describable
    /// exactly are described up to at least `horizon` positions and have a
    /// tail of the same membership class.
    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance>;

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        let mut v = self.image_prefix(x, i + 1)?;
        Ok(v.swap_remove(i as usize))
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        (0..len).map(|i| self.image_at(x, i)).collect()
    }

    /// `r_-`: a source witness to a target witness.
    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness>;

    /// `r_+`: a target witness to a source witness.
    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness>;

    /// Demi-reductions have no forward map.
    fn is_demi(&self) -> bool {
        false
    }

    /// The one input variant this map handles, when the source problem
    /// accepts several.
    fn input_variant(&self) -> Option<Variant> {
        None
    }
}

pub type ReductionRef = Arc<dyn Reduction>;

pub struct Identity {
    pub problem: ProblemRef,
}

impl Identity {
    pub fn arc(problem: ProblemRef) -> ReductionRef {
        Arc::new(Identity { problem })
    }
}

impl Reduction for Identity {
    fn id(&self) -> String {
        format!("id_{}", self.problem.id())
    }

    fn source(&self) -> ProblemRef {
        self.problem.clone()
    }

    fn target(&self) -> ProblemRef {
        self.problem.clone()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(d.clone())
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        x.get(i)
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(w.clone())
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(v.clone())
    }
}

/// `g . f`; the intermediate stream is materialized lazily from `f`.
pub struct Compose {
    pub f: ReductionRef,
    pub g: ReductionRef,
}

pub fn compose(f: ReductionRef, g: ReductionRef) -> Result<ReductionRef> {
    if f.target().id() != g.source().id() {
        return Err(Error::mismatch(g.source().id(), f.target().id()));
    }
    Ok(Arc::new(Compose { f, g }))
}

/// Composes a nonempty chain left to right.
pub fn compose_chain(chain: &[ReductionRef]) -> Result<ReductionRef> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| Error::Parse("empty reduction chain".into()))?;
    rest.iter().try_fold(first.clone(), |acc, r| compose(acc, r.clone()))
}

impl Reduction for Compose {
    fn id(&self) -> String {
        format!("{}+{}", self.f.id(), self.g.id())
    }

    fn source(&self) -> ProblemRef {
        self.f.source()
    }

    fn target(&self) -> ProblemRef {
        self.g.target()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        self.g.image(&self.f.image(d, horizon)?, horizon)
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        self.g.image_prefix(&x.image(self.f.clone()), len)
    }

    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let mid = self.f.forward(w, x)?;
        self.g.forward(&mid, &x.image(self.f.clone()))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let mid = self.g.backward(v, &x.image(self.f.clone()))?;
        self.f.backward(&mid, x)
    }

    fn is_demi(&self) -> bool {
        self.f.is_demi() || self.g.is_demi()
    }

    fn input_variant(&self) -> Option<Variant> {
        self.f.input_variant()
    }
}

/// A reduction with its forward map removed.
pub struct Demi {
    pub inner: ReductionRef,
}

pub fn weaken(inner: ReductionRef) -> ReductionRef {
    Arc::new(Demi { inner })
}

impl Reduction for Demi {
    fn id(&self) -> String {
        format!("demi({})", self.inner.id())
    }

    fn source(&self) -> ProblemRef {
        self.inner.source()
    }

    fn target(&self) -> ProblemRef {
        self.inner.target()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        self.inner.image(d, horizon)
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        self.inner.image_at(x, i)
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        self.inner.image_prefix(x, len)
    }

    fn forward(&self, _w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Err(Error::NoForwardMap(self.id()))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        self.inner.backward(v, x)
    }

    fn is_demi(&self) -> bool {
        true
    }

    fn input_variant(&self) -> Option<Variant> {
        self.inner.input_variant()
    }
}

/// The injection of one side into `a + b`.
pub struct Injection {
    pub sum: Arc<Coproduct>,
    pub tag: u8,
}

/// The two injections `a -> a + b` and `b -> a + b`.
pub fn injections(a: ProblemRef, b: ProblemRef) -> (ReductionRef, ReductionRef) {
    let sum = Arc::new(Coproduct::new(a, b));
    (
        Arc::new(Injection { sum: sum.clone(), tag: 0 }),
        Arc::new(Injection { sum, tag: 1 }),
    )
}

impl Reduction for Injection {
    fn id(&self) -> String {
        format!("inj{}_{}", self.tag, self.sum.id_str())
    }

    fn source(&self) -> ProblemRef {
        self.sum.side(self.tag).clone()
    }

    fn target(&self) -> ProblemRef {
        self.sum.clone()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(Instance::Tagged {
            tag: self.tag,
            inner: Box::new(d.clone()),
        })
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        match i {
            0 => Ok(Value::Nat(self.tag as u64)),
            _ => x.get(i - 1),
        }
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        Ok(Witness::tuple2(Witness::Nat(self.tag as u64), w.clone()))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (_, w) = v.as_tuple2().ok_or_else(|| v.schema_error("[tag,w]"))?;
        Ok(w.clone())
    }
}

/// `a + b -> c` from `a -> c` and `b -> c`: read the tag, then run the
/// matching side on the rest of the stream.
pub struct CaseSplit {
    pub sum: Arc<Coproduct>,
    pub left: ReductionRef,
    pub right: ReductionRef,
}

pub fn case_split(left: ReductionRef, right: ReductionRef) -> Result<ReductionRef> {
    if left.target().id() != right.target().id() {
        return Err(Error::mismatch(left.target().id(), right.target().id()));
    }
    let sum = Arc::new(Coproduct::new(left.source(), right.source()));
    Ok(Arc::new(CaseSplit { sum, left, right }))
}

impl CaseSplit {
    fn side(&self, tag: u64) -> Result<&ReductionRef> {
        match tag {
            0 => Ok(&self.left),
            1 => Ok(&self.right),
            t => Err(Error::MalformedStream {
                index: 0,
                detail: format!("coproduct tag {t}"),
            }),
        }
    }
}

impl Reduction for CaseSplit {
    fn id(&self) -> String {
        format!("case({},{})", self.left.id(), self.right.id())
    }

    fn source(&self) -> ProblemRef {
        self.sum.clone()
    }

    fn target(&self) -> ProblemRef {
        self.left.target()
    }

    fn image(&self, d: &Instance, horizon: u64) -> Result<Instance> {
        match d {
            Instance::Tagged { tag, inner } => self.side(*tag as u64)?.image(inner, horizon),
            other => Err(Error::mismatch("tagged", other.variant().to_string())),
        }
    }

    fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let tag = x.nat(0)?;
        self.side(tag)?.image_prefix(&x.shift(1), len)
    }

    fn forward(&self, w: &Witness, x: &StreamHandle) -> Result<Witness> {
        let (_, inner) = w.as_tuple2().ok_or_else(|| w.schema_error("[tag,w]"))?;
        let tag = x.nat(0)?;
        self.side(tag)?.forward(inner, &x.shift(1))
    }

    fn backward(&self, v: &Witness, x: &StreamHandle) -> Result<Witness> {
        let tag = x.nat(0)?;
        let w = self.side(tag)?.backward(v, &x.shift(1))?;
        Ok(Witness::tuple2(Witness::Nat(tag), w))
    }

    fn is_demi(&self) -> bool {
        self.left.is_demi() || self.right.is_demi()
    }
}
