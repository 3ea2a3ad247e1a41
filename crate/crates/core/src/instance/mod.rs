//! Finite descriptions of points of the represented spaces, and the
//! infinite streams they name.

pub mod family;
pub mod graph;
pub mod order;
pub mod real;
pub mod seq;
pub mod tree;

pub use family::{ColumnDefault, CutDefault, Cuts, FamilySeqInstance};
pub use graph::{ActionInstance, Edge, GraphBody, GraphInstance, Presentation, UnionFind};
pub use order::{BottomedPosetInstance, LinearOrderInstance, PosetInstance};
pub use real::{ApproxRule, PreRealInstance, RealSeqInstance, RealTarget};
pub use seq::{Q, Seq, SeqInstance, Tail};
pub use tree::TreeInstance;

use crate::coding::{pair, unpair, Bits};
use crate::error::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One symbol of a name. Rationals stay symbolic instead of being coded
/// into naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Nat(u64),
    Rat(BigRational),
}

impl Value {
    pub fn bool(b: bool) -> Self {
        Value::Nat(b as u64)
    }

    pub fn nat(&self) -> Result<u64> {
        match self {
            Value::Nat(n) => Ok(*n),
            Value::Rat(q) => Err(Error::MalformedStream {
                index: 0,
                detail: format!("expected a natural, read {q}"),
            }),
        }
    }

    pub fn rat(&self) -> Result<BigRational> {
        match self {
            Value::Rat(q) => Ok(q.clone()),
            Value::Nat(n) => Err(Error::MalformedStream {
                index: 0,
                detail: format!("expected a rational, read {n}"),
            }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Rat(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Seq,
    RatSeq,
    RealSeq,
    PreReal,
    Family,
    Graph(Presentation),
    Action,
    Poset,
    LinearOrder,
    BottomedPoset,
    Tree,
    Tagged,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Seq => "seq",
            Variant::RatSeq => "rat_seq",
            Variant::RealSeq => "real_seq",
            Variant::PreReal => "pre_real",
            Variant::Family => "family",
            Variant::Graph(Presentation::Subset) => "graph(subset)",
            Variant::Graph(Presentation::Function) => "graph(function)",
            Variant::Action => "action",
            Variant::Poset => "poset",
            Variant::LinearOrder => "linear_order",
            Variant::BottomedPoset => "bottomed_poset",
            Variant::Tree => "tree",
            Variant::Tagged => "tagged",
        };
        f.write_str(s)
    }
}

/// A finite description of a point.
///
/// Stream layouts:
/// - `seq`: `x(i)`; `rat_seq`: `x(i)` as a rational;
/// - `real_seq`: `<n,j>` is the `j`-th approximation of `x_n`;
/// - `pre_real`: `j` is the `j`-th approximation;
/// - `family`: `<n,k>` is `x_n(k)`;
/// - subset graph: `2v` is `[v in V]`, `2<u,w>+1` is `[{u,w} in E]` for `u < w`;
/// - function graph: `3v` is `[v in V]`, `3e+1` is `[e in E]`, `3e+2` is
///   `1 + <u,w>` for `gamma(e) = {u < w}`, else 0;
/// - action: `<0,a>` is `[a in S]`, `<1,g>` is `[g in G]`, `<2,<g,h>>` is
///   `g*h`, `<3,g>` is `g^-1`, `<4,<g,a>>` is `g.a` (0 when undefined);
/// - orders: `<a,b>` is `[a <= b]`; bottomed posets put the bottom's code
///   at 0 and `[a <= b]` at `1 + <a,b>`;
/// - tree: `code(sigma)` is `[sigma in T]`;
/// - tagged: 0 is the tag, `i+1` is position `i` of the inner stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Instance {
    Seq(SeqInstance),
    RatSeq(Seq<Q>),
    RealSeq(RealSeqInstance),
    PreReal(PreRealInstance),
    Family(FamilySeqInstance),
    Graph(GraphInstance),
    Action(ActionInstance),
    Poset(PosetInstance),
    LinearOrder(LinearOrderInstance),
    BottomedPoset(BottomedPosetInstance),
    Tree(TreeInstance),
    Tagged { tag: u8, inner: Box<Instance> },
}

impl Instance {
    pub fn variant(&self) -> Variant {
        match self {
            Instance::Seq(_) => Variant::Seq,
            Instance::RatSeq(_) => Variant::RatSeq,
            Instance::RealSeq(_) => Variant::RealSeq,
            Instance::PreReal(_) => Variant::PreReal,
            Instance::Family(_) => Variant::Family,
            Instance::Graph(g) => Variant::Graph(g.presentation),
            Instance::Action(_) => Variant::Action,
            Instance::Poset(_) => Variant::Poset,
            Instance::LinearOrder(_) => Variant::LinearOrder,
            Instance::BottomedPoset(_) => Variant::BottomedPoset,
            Instance::Tree(_) => Variant::Tree,
            Instance::Tagged { .. } => Variant::Tagged,
        }
    }

    /// Checks the structural invariants a parsed description must satisfy.
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Seq(x) => x.validate(),
            Instance::RatSeq(x) => x.validate(),
            Instance::RealSeq(x) => x.values.validate(),
            Instance::PreReal(x) => match &x.target {
                RealTarget::SquareDyadicSum(s) => s.validate(),
                RealTarget::Rational(_) => Ok(()),
            },
            Instance::Family(f) => f.exceptions.values().try_for_each(Seq::validate),
            Instance::Graph(g) => g.validate(),
            Instance::Action(a) => a.validate(),
            Instance::Poset(p) => p.validate(),
            Instance::Tagged { inner, .. } => inner.validate(),
            Instance::LinearOrder(_) | Instance::BottomedPoset(_) | Instance::Tree(_) => Ok(()),
        }
    }

    /// The value of the named stream at position `i`.
    pub fn value_at(&self, i: u64) -> Result<Value> {
        let nat = |n: u64| Ok(Value::Nat(n));
        let flag = |b: bool| Ok(Value::bool(b));
        match self {
            Instance::Seq(x) => nat(x.at(i)),
            Instance::RatSeq(x) => Ok(Value::Rat(x.at(i).0)),
            Instance::RealSeq(x) => {
                let (n, j) = unpair(i);
                Ok(Value::Rat(x.approx_at(n, j)))
            }
            Instance::PreReal(x) => Ok(Value::Rat(x.approx_at(i))),
            Instance::Family(f) => {
                let (n, k) = unpair(i);
                nat(f.at(n, k)?)
            }
            Instance::Graph(g) => match g.presentation {
                Presentation::Subset if i % 2 == 0 => flag(g.has_vertex(i / 2)?),
                Presentation::Subset => {
                    let (u, w) = unpair(i / 2);
                    flag(u < w && g.adjacent(u, w)?)
                }
                Presentation::Function => match i % 3 {
                    0 => flag(g.has_vertex(i / 3)?),
                    1 => flag(g.edge_ends(i / 3)?.is_some()),
                    _ => nat(g.edge_ends(i / 3)?.map_or(0, |(u, w)| 1 + pair(u, w))),
                },
            },
            Instance::Action(a) => {
                let (tag, r) = unpair(i);
                let overflow = || Error::Unsupported(format!("group element code at position {i} exceeds 64 bits"));
                match tag {
                    0 => flag(a.carrier.contains(&r)),
                    1 => flag(a.is_element(r)),
                    2 => {
                        let (g, h) = unpair(r);
                        if a.is_element(g) && a.is_element(h) {
                            nat(a.multiply(g, h).ok_or_else(overflow)?)
                        } else {
                            nat(0)
                        }
                    }
                    3 if a.is_element(r) => nat(a.inverse(r).ok_or_else(overflow)?),
                    4 => {
                        let (g, x) = unpair(r);
                        if a.is_element(g) && a.carrier.contains(&x) {
                            nat(a.act(g, x))
                        } else {
                            nat(0)
                        }
                    }
                    _ => nat(0),
                }
            }
            Instance::Poset(p) => {
                let (a, b) = unpair(i);
                flag(p.leq(a, b))
            }
            Instance::LinearOrder(l) => {
                let (a, b) = unpair(i);
                flag(l.leq(a, b)?)
            }
            Instance::BottomedPoset(p) => {
                if i == 0 {
                    return nat(order::BOTTOM);
                }
                let (a, b) = unpair(i - 1);
                flag(p.leq(a, b)?)
            }
            Instance::Tree(t) => flag(t.contains(&Bits::from_code(i))?),
            Instance::Tagged { tag, inner } => match i {
                0 => nat(*tag as u64),
                _ => inner.value_at(i - 1),
            },
        }
    }

    /// Largest index, value or vertex the description mentions.
    pub fn universe(&self) -> u64 {
        match self {
            Instance::Seq(x) => x.universe(),
            Instance::RatSeq(x) => x.universe(),
            Instance::RealSeq(x) => x.values.universe(),
            Instance::PreReal(x) => x.universe(),
            Instance::Family(f) => f.universe(),
            Instance::Graph(g) => g.universe(),
            Instance::Action(a) => a.universe(),
            Instance::Poset(p) => p.universe(),
            Instance::LinearOrder(l) => l.universe(),
            Instance::BottomedPoset(p) => p.universe(),
            Instance::Tree(t) => t.universe(),
            Instance::Tagged { inner, .. } => inner.universe(),
        }
    }

    pub fn expect_seq(&self) -> Result<&SeqInstance> {
        match self {
            Instance::Seq(x) => Ok(x),
            other => Err(Error::mismatch("seq", other.variant().to_string())),
        }
    }

    pub fn expect_family(&self) -> Result<&FamilySeqInstance> {
        match self {
            Instance::Family(f) => Ok(f),
            other => Err(Error::mismatch("family", other.variant().to_string())),
        }
    }

    pub fn expect_poset(&self) -> Result<&PosetInstance> {
        match self {
            Instance::Poset(p) => Ok(p),
            other => Err(Error::mismatch("poset", other.variant().to_string())),
        }
    }

    pub fn expect_graph(&self, presentation: Presentation) -> Result<&GraphInstance> {
        match self {
            Instance::Graph(g) if g.presentation == presentation => Ok(g),
            other => Err(Error::mismatch(
                Variant::Graph(presentation).to_string(),
                other.variant().to_string(),
            )),
        }
    }

    pub fn expect_pre_real(&self) -> Result<&PreRealInstance> {
        match self {
            Instance::PreReal(x) => Ok(x),
            other => Err(Error::mismatch("pre_real", other.variant().to_string())),
        }
    }

    pub fn expect_action(&self) -> Result<&ActionInstance> {
        match self {
            Instance::Action(a) => Ok(a),
            other => Err(Error::mismatch("action", other.variant().to_string())),
        }
    }

    pub fn seq(prefix: Vec<u64>, tail: Tail<u64>) -> Self {
        Instance::Seq(Seq::new(prefix, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_stream() {
        let x = Instance::seq(vec![3, 3, 5], Tail::Const(5));
        assert_eq!(x.value_at(1).unwrap(), Value::Nat(3));
        assert_eq!(Instance::seq(vec![], Tail::Ramp).value_at(7).unwrap(), Value::Nat(7));
        assert_eq!(Instance::seq(vec![1], Tail::Const(0)).value_at(9).unwrap(), Value::Nat(0));
    }

    #[test]
    fn json_roundtrip() {
        let x = Instance::Family(FamilySeqInstance::with_default(ColumnDefault::Refutation {
            family: crate::family::Family::FinThreshold,
            base: Box::new(Instance::seq(vec![1], Tail::Const(0))),
        }));
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<Instance>(&text).unwrap(), x);
    }

    #[test]
    fn subset_graph_stream() {
        let g = Instance::Graph(GraphInstance::finite(Presentation::Subset, [0, 1, 2], vec![Edge::new(0, 1)]));
        assert_eq!(g.value_at(4).unwrap(), Value::Nat(1));
        assert_eq!(g.value_at(2 * pair(0, 1) + 1).unwrap(), Value::Nat(1));
        assert_eq!(g.value_at(2 * pair(0, 2) + 1).unwrap(), Value::Nat(0));
    }
}
