//! Reductions among disconnectedness of graphs in both presentations and
//! non-transitivity of group actions.

use crate::coding::{decode_list, encode_list, try_pair, untriple, unpair};
use crate::error::{Error, Result};
use crate::instance::graph::reduce_into;
use crate::instance::{ActionInstance, Edge, GraphBody, GraphInstance, Instance, Presentation, Value};
use crate::problems::{Catalog, ProblemRef};
use crate::reduction::Reduction;
use crate::stream::StreamHandle;
use crate::witness::Witness;
use std::collections::{BTreeMap, BTreeSet};

fn overflow(what: &str) -> Error {
    Error::Unsupported(format!("{what} code exceeds 64 bits"))
}

fn pair_witness(w: &Witness) -> Result<(u64, u64)> {
    w.expect_pair("[a,b]")
}

/// A set of edges read as its inclusion map: the edge `{u < w}` gets the
/// identity `<u,w>`. Witnesses are unchanged.
pub struct DisConnSubToFun;

impl Reduction for DisConnSubToFun {
    fn id(&self) -> String {
        "disconn_sub_to_fun".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::DisConn.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::DisConnFun.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        let g = d.expect_graph(Presentation::Subset)?;
        let body = match &g.body {
            GraphBody::Finite { vertices, edges } => {
                let ends: BTreeSet<(u64, u64)> = edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
                let edges = ends
                    .into_iter()
                    .map(|(u, w)| Ok(Edge::with_id(try_pair(u, w).ok_or_else(|| overflow("edge"))?, u, w)))
                    .collect::<Result<_>>()?;
                GraphBody::Finite {
                    vertices: vertices.clone(),
                    edges,
                }
            }
            other => other.clone(),
        };
        Ok(Instance::Graph(GraphInstance {
            presentation: Presentation::Function,
            body,
        }))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        let e = i / 3;
        let (u, w) = unpair(e);
        match i % 3 {
            0 => x.get(2 * e),
            1 if u < w => Ok(Value::bool(x.flag(2 * e + 1)?)),
            2 if u < w && x.flag(2 * e + 1)? => Ok(Value::Nat(1 + e)),
            _ => Ok(Value::Nat(0)),
        }
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(w)?;
        Ok(Witness::pair(a, b))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(v)?;
        Ok(Witness::pair(a, b))
    }
}

/// Subdivides every edge: vertex `v` becomes `2v` and edge `e` with ends
/// `u < w` becomes the midpoint `2<u,w,e>+1`. A midpoint in a witness is
/// sent back to its smaller end.
pub struct DisConnFunToSub;

/// Whether odd vertex `m` is the midpoint of an edge, and its ends.
fn midpoint(x: &StreamHandle, m: u64) -> Result<Option<(u64, u64)>> {
    let (u, w, e) = untriple(m / 2);
    if u >= w {
        return Ok(None);
    }
    let Some(code) = try_pair(u, w) else {
        return Ok(None);
    };
    Ok((x.nat(3 * e + 2)? == 1 + code).then_some((u, w)))
}

fn project(v: u64) -> u64 {
    if v % 2 == 0 {
        v / 2
    } else {
        untriple(v / 2).0
    }
}

impl Reduction for DisConnFunToSub {
    fn id(&self) -> String {
        "disconn_fun_to_sub".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::DisConnFun.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::DisConn.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        let g = d.expect_graph(Presentation::Function)?;
        Ok(Instance::Graph(GraphInstance {
            presentation: Presentation::Subset,
            body: GraphBody::Subdivided { base: Box::new(g.clone()) },
        }))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        if i % 2 == 0 {
            let v = i / 2;
            return if v % 2 == 0 {
                x.get(3 * (v / 2))
            } else {
                Ok(Value::bool(midpoint(x, v)?.is_some()))
            };
        }
        let (a, b) = unpair(i / 2);
        let (even, odd) = match (a < b, a % 2, b % 2) {
            (true, 0, 1) => (a, b),
            (true, 1, 0) => (b, a),
            _ => return Ok(Value::Nat(0)),
        };
        let end = even / 2;
        Ok(Value::bool(midpoint(x, odd)?.is_some_and(|(u, w)| end == u || end == w)))
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(w)?;
        Ok(Witness::pair(2 * a, 2 * b))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(v)?;
        Ok(Witness::pair(project(a), project(b)))
    }
}

/// The move graph of an action: edge `<g,a>` joins `a` to `g.a` unless
/// `g` fixes `a`. Witnesses are unchanged.
pub struct OrbitToDisConnFun;

impl Reduction for OrbitToDisConnFun {
    fn id(&self) -> String {
        "orbit_to_disconnfun".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::Orbit.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::DisConnFun.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        Ok(Instance::Graph(GraphInstance {
            presentation: Presentation::Function,
            body: GraphBody::ActionGraph {
                action: d.expect_action()?.clone(),
            },
        }))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        let at = |tag: u64, r: u64| try_pair(tag, r).ok_or_else(|| overflow("position"));
        let e = i / 3;
        if i % 3 == 0 {
            return x.get(at(0, e)?);
        }
        let (g, a) = unpair(e);
        let moved = if x.flag(at(0, a)?)? && x.flag(at(1, g)?)? {
            let b = x.nat(at(4, e)?)?;
            (b != a).then_some((a.min(b), a.max(b)))
        } else {
            None
        };
        match (i % 3, moved) {
            (1, m) => Ok(Value::bool(m.is_some())),
            (_, Some((u, w))) => Ok(Value::Nat(1 + try_pair(u, w).ok_or_else(|| overflow("edge"))?)),
            (_, None) => Ok(Value::Nat(0)),
        }
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(w)?;
        Ok(Witness::pair(a, b))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(v)?;
        Ok(Witness::pair(a, b))
    }
}

/// The free group on the edges acting on the vertices: edge `e` with ends
/// `u, w` swaps them and fixes everything else. Witnesses are unchanged.
/// Description-level images exist for finite graphs only.
pub struct DisConnFunToOrbit;

struct EdgeReader<'a> {
    x: &'a StreamHandle,
}

impl EdgeReader<'_> {
    fn is_edge(&self, e: u64) -> Result<bool> {
        self.x.flag(3 * e + 1)
    }

    fn is_element(&self, code: u64) -> Result<bool> {
        let word = decode_list(code);
        if word.windows(2).any(|w| w[1] == w[0] ^ 1) {
            return Ok(false);
        }
        for l in &word {
            if !self.is_edge(l / 2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn swap(&self, e: u64, a: u64) -> Result<u64> {
        let code = self.x.nat(3 * e + 2)?;
        if code == 0 {
            return Ok(a);
        }
        let (u, w) = unpair(code - 1);
        Ok(if a == u {
            w
        } else if a == w {
            u
        } else {
            a
        })
    }
}

impl Reduction for DisConnFunToOrbit {
    fn id(&self) -> String {
        "disconnfun_to_orbit".into()
    }

    fn source(&self) -> ProblemRef {
        Catalog::DisConnFun.arc()
    }

    fn target(&self) -> ProblemRef {
        Catalog::Orbit.arc()
    }

    fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
        let g = d.expect_graph(Presentation::Function)?;
        let GraphBody::Finite { vertices, edges } = &g.body else {
            return Err(Error::Unsupported(
                "the edge group of an infinite graph has no finite description".into(),
            ));
        };
        let mut generators = BTreeMap::new();
        for e in edges {
            let id = e.id.ok_or_else(|| Error::Parse("function presentation needs edge ids".into()))?;
            generators.insert(id, BTreeMap::from([(e.u, e.v), (e.v, e.u)]));
        }
        Ok(Instance::Action(ActionInstance {
            carrier: vertices.clone(),
            generators,
        }))
    }

    fn image_at(&self, x: &StreamHandle, i: u64) -> Result<Value> {
        let r = EdgeReader { x };
        let (tag, z) = unpair(i);
        let nat = |n: Option<u64>| n.map(Value::Nat).ok_or_else(|| overflow("group element"));
        match tag {
            0 => Ok(Value::bool(x.flag(3 * z)?)),
            1 => Ok(Value::bool(r.is_element(z)?)),
            2 => {
                let (g, h) = unpair(z);
                if r.is_element(g)? && r.is_element(h)? {
                    let mut w = decode_list(g);
                    reduce_into(&mut w, decode_list(h));
                    nat(encode_list(&w))
                } else {
                    Ok(Value::Nat(0))
                }
            }
            3 if r.is_element(z)? => {
                let w: Vec<u64> = decode_list(z).into_iter().rev().map(|l| l ^ 1).collect();
                nat(encode_list(&w))
            }
            4 => {
                let (g, a) = unpair(z);
                if r.is_element(g)? && x.flag(3 * a)? {
                    let mut b = a;
                    for l in decode_list(g).into_iter().rev() {
                        b = r.swap(l / 2, b)?;
                    }
                    Ok(Value::Nat(b))
                } else {
                    Ok(Value::Nat(0))
                }
            }
            _ => Ok(Value::Nat(0)),
        }
    }

    fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(w)?;
        Ok(Witness::pair(a, b))
    }

    fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
        let (a, b) = pair_witness(v)?;
        Ok(Witness::pair(a, b))
    }
}
