//! Countable graphs and finite group actions given by finite descriptions.

use super::family::Cuts;
use crate::coding::{decode_list, encode_list, pair, try_pair, unpair, untriple};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Disjoint-set forest over sparse naturals.
#[derive(Default)]
pub struct UnionFind {
    parent: BTreeMap<u64, u64>,
}

impl UnionFind {
    pub fn find(&mut self, a: u64) -> u64 {
        let p = *self.parent.entry(a).or_insert(a);
        if p == a {
            return a;
        }
        let root = self.find(p);
        self.parent.insert(a, root);
        root
    }

    pub fn union(&mut self, a: u64, b: u64) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent.insert(hi, lo);
        }
    }

    pub fn same(&mut self, a: u64, b: u64) -> bool {
        self.find(a) == self.find(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    /// `E` is a set of unordered pairs.
    Subset,
    /// Edges carry identities `e` with endpoints `gamma(e)`.
    Function,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub u: u64,
    pub v: u64,
    /// Edge identity; required in the function presentation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u64>,
}

impl Edge {
    pub fn new(u: u64, v: u64) -> Self {
        Edge { u, v, id: None }
    }

    pub fn with_id(id: u64, u: u64, v: u64) -> Self {
        Edge { u, v, id: Some(id) }
    }

    fn ends(&self) -> (u64, u64) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphBody {
    Finite {
        vertices: BTreeSet<u64>,
        edges: Vec<Edge>,
    },
    /// Hub `0` and paths `(n,0) - (n,1) - ...` on vertices `1 + <n,i>`;
    /// a path cut at stage `c` stops at `(n,c)` and is joined to the hub.
    ColumnPaths { cuts: Cuts },
    /// Generator-move graph of an action: edge `<g,a>` joins `a` and `g.a`,
    /// loops dropped. Function presentation only.
    ActionGraph { action: ActionInstance },
    /// Each edge `e` of a function-presented graph with ends `u < w` becomes
    /// a midpoint `2<u,w,e>+1` adjacent to `2u` and `2w`.
    Subdivided { base: Box<GraphInstance> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphInstance {
    pub presentation: Presentation,
    pub body: GraphBody,
}

/// Hub vertex of a column-path graph.
pub const HUB: u64 = 0;

pub fn path_vertex(n: u64, i: u64) -> u64 {
    1 + pair(n, i)
}

pub fn decode_path_vertex(v: u64) -> Option<(u64, u64)> {
    (v > 0).then(|| unpair(v - 1))
}

impl GraphInstance {
    pub fn finite(presentation: Presentation, vertices: impl IntoIterator<Item = u64>, edges: Vec<Edge>) -> Self {
        GraphInstance {
            presentation,
            body: GraphBody::Finite {
                vertices: vertices.into_iter().collect(),
                edges,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.body, self.presentation) {
            (GraphBody::Finite { vertices, edges }, p) => {
                let mut ids = BTreeSet::new();
                for e in edges {
                    if e.u == e.v || !vertices.contains(&e.u) || !vertices.contains(&e.v) {
                        return Err(Error::Parse(format!("edge {}-{} is not between distinct vertices", e.u, e.v)));
                    }
                    if p == Presentation::Function {
                        let id = e.id.ok_or_else(|| Error::Parse("function presentation needs edge ids".into()))?;
                        if !ids.insert(id) {
                            return Err(Error::Parse(format!("duplicate edge id {id}")));
                        }
                    }
                }
                Ok(())
            }
            (GraphBody::ColumnPaths { .. }, _) => Ok(()),
            (GraphBody::ActionGraph { action }, Presentation::Function) => action.validate(),
            (GraphBody::Subdivided { base }, _) if base.presentation == Presentation::Function => base.validate(),
            _ => Err(Error::Parse("graph body does not support this presentation".into())),
        }
    }

    pub fn has_vertex(&self, v: u64) -> Result<bool> {
        match &self.body {
            GraphBody::Finite { vertices, .. } => Ok(vertices.contains(&v)),
            GraphBody::ColumnPaths { cuts } => match decode_path_vertex(v) {
                None => Ok(true),
                Some((n, i)) => Ok(cuts.cut(n)?.is_none_or(|c| i <= c)),
            },
            GraphBody::ActionGraph { action } => Ok(action.carrier.contains(&v)),
            GraphBody::Subdivided { base } => {
                if v % 2 == 0 {
                    base.has_vertex(v / 2)
                } else {
                    let (u, w, e) = untriple(v / 2);
                    Ok(u < w && base.edge_ends(e)? == Some((u, w)))
                }
            }
        }
    }

    /// Whether `{a, b}` is an edge (subset view; in the function view,
    /// whether some edge has these ends).
    pub fn adjacent(&self, a: u64, b: u64) -> Result<bool> {
        if a == b {
            return Ok(false);
        }
        let (a, b) = (a.min(b), a.max(b));
        match &self.body {
            GraphBody::Finite { edges, .. } => Ok(edges.iter().any(|e| e.ends() == (a, b))),
            GraphBody::ColumnPaths { cuts } => {
                let Some((m, j)) = decode_path_vertex(b) else {
                    return Ok(false);
                };
                match decode_path_vertex(a) {
                    None => Ok(cuts.cut(m)? == Some(j)),
                    Some((n, i)) => Ok(n == m && i.abs_diff(j) == 1 && cuts.cut(n)?.is_none_or(|c| i.max(j) <= c)),
                }
            }
            GraphBody::ActionGraph { action } => Ok(action.connects_in_one_move(a, b)),
            GraphBody::Subdivided { base } => {
                let (even, odd) = match (a % 2, b % 2) {
                    (0, 1) => (a, b),
                    (1, 0) => (b, a),
                    _ => return Ok(false),
                };
                let (u, w, e) = untriple(odd / 2);
                Ok(u < w && (even / 2 == u || even / 2 == w) && base.edge_ends(e)? == Some((u, w)))
            }
        }
    }

    /// Ends of edge `e` (function presentation), smaller first. Bodies
    /// without their own edge identities use `e = <u,w>` for `u < w`.
    pub fn edge_ends(&self, e: u64) -> Result<Option<(u64, u64)>> {
        match &self.body {
            GraphBody::Finite { edges, .. } => Ok(edges.iter().find(|x| x.id == Some(e)).map(Edge::ends)),
            GraphBody::ColumnPaths { .. } | GraphBody::Subdivided { .. } => {
                let (u, w) = unpair(e);
                Ok((u < w && self.adjacent(u, w)?).then_some((u, w)))
            }
            GraphBody::ActionGraph { action } => {
                let (g, a) = unpair(e);
                if !action.carrier.contains(&a) || !action.is_element(g) {
                    return Ok(None);
                }
                let b = action.act(g, a);
                Ok((b != a).then(|| (a.min(b), a.max(b))))
            }
        }
    }

    /// Whether `a` and `b` are vertices joined by a finite path.
    pub fn connected(&self, a: u64, b: u64) -> Result<bool> {
        if !self.has_vertex(a)? || !self.has_vertex(b)? {
            return Ok(false);
        }
        if a == b {
            return Ok(true);
        }
        match &self.body {
            GraphBody::Finite { edges, .. } => {
                let mut uf = UnionFind::default();
                for e in edges {
                    uf.union(e.u, e.v);
                }
                Ok(uf.same(a, b))
            }
            GraphBody::ColumnPaths { cuts } => match (decode_path_vertex(a), decode_path_vertex(b)) {
                (Some((n, _)), Some((m, _))) if n == m => Ok(true),
                (Some((n, _)), Some((m, _))) => Ok(cuts.cut(n)?.is_some() && cuts.cut(m)?.is_some()),
                (Some((n, _)), None) | (None, Some((n, _))) => Ok(cuts.cut(n)?.is_some()),
                (None, None) => Ok(true),
            },
            GraphBody::ActionGraph { action } => Ok(action.same_orbit(a, b)),
            GraphBody::Subdivided { base } => {
                let project = |v: u64| if v % 2 == 0 { v / 2 } else { untriple(v / 2).0 };
                base.connected(project(a), project(b))
            }
        }
    }

    /// Whether there are two vertices with no path between them.
    pub fn is_disconnected(&self) -> Result<bool> {
        match &self.body {
            GraphBody::Finite { vertices, edges } => {
                let mut uf = UnionFind::default();
                for e in edges {
                    uf.union(e.u, e.v);
                }
                let roots: BTreeSet<u64> = vertices.iter().map(|&v| uf.find(v)).collect();
                Ok(roots.len() >= 2)
            }
            GraphBody::ColumnPaths { cuts } => Ok(cuts.least_uncut()?.is_some()),
            GraphBody::ActionGraph { action } => Ok(action.orbits().len() >= 2),
            GraphBody::Subdivided { base } => base.is_disconnected(),
        }
    }

    pub fn universe(&self) -> u64 {
        match &self.body {
            GraphBody::Finite { vertices, edges } => {
                let v = vertices.iter().copied().max().unwrap_or(0);
                let e = edges.iter().filter_map(|e| e.id).max().unwrap_or(0);
                v.max(e)
            }
            GraphBody::ColumnPaths { cuts } => cuts.universe(),
            GraphBody::ActionGraph { action } => action.universe(),
            GraphBody::Subdivided { base } => base.universe(),
        }
    }
}

/// A finite set acted on by the free group over a set of generator ids.
/// Group elements are reduced words; letter `2g` is generator `g` and
/// `2g+1` its inverse; a word is coded by the list coding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionInstance {
    pub carrier: BTreeSet<u64>,
    /// Generator id to permutation of the carrier (points not listed are fixed).
    pub generators: BTreeMap<u64, BTreeMap<u64, u64>>,
}

fn letter_inverse(l: u64) -> u64 {
    l ^ 1
}

/// Appends letters to a reduced word, cancelling adjacent inverse pairs.
pub fn reduce_into(word: &mut Vec<u64>, letters: impl IntoIterator<Item = u64>) {
    for l in letters {
        if word.last() == Some(&letter_inverse(l)) {
            word.pop();
        } else {
            word.push(l);
        }
    }
}

impl ActionInstance {
    pub fn trivial(carrier: impl IntoIterator<Item = u64>) -> Self {
        ActionInstance {
            carrier: carrier.into_iter().collect(),
            generators: BTreeMap::new(),
        }
    }

    pub fn with_generator(mut self, id: u64, perm: impl IntoIterator<Item = (u64, u64)>) -> Self {
        self.generators.insert(id, perm.into_iter().collect());
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (id, perm) in &self.generators {
            let images: BTreeSet<u64> = perm.values().copied().collect();
            let domain: BTreeSet<u64> = perm.keys().copied().collect();
            if images.len() != perm.len() || images != domain || !domain.is_subset(&self.carrier) {
                return Err(Error::Parse(format!("generator {id} is not a permutation of the carrier")));
            }
        }
        Ok(())
    }

    fn apply_letter(&self, l: u64, a: u64) -> u64 {
        let Some(perm) = self.generators.get(&(l / 2)) else {
            return a;
        };
        if l % 2 == 0 {
            perm.get(&a).copied().unwrap_or(a)
        } else {
            perm.iter().find(|(_, &b)| b == a).map_or(a, |(&x, _)| x)
        }
    }

    /// Whether `code` codes a reduced word over known generators.
    pub fn is_element(&self, code: u64) -> bool {
        let word = decode_list(code);
        word.iter().all(|l| self.generators.contains_key(&(l / 2)))
            && word.windows(2).all(|w| w[1] != letter_inverse(w[0]))
    }

    /// `g . a`: the rightmost letter acts first.
    pub fn act(&self, g: u64, a: u64) -> u64 {
        decode_list(g).iter().rev().fold(a, |x, &l| self.apply_letter(l, x))
    }

    pub fn multiply(&self, g: u64, h: u64) -> Option<u64> {
        let mut w = decode_list(g);
        reduce_into(&mut w, decode_list(h));
        encode_list(&w)
    }

    pub fn inverse(&self, g: u64) -> Option<u64> {
        let w: Vec<u64> = decode_list(g).into_iter().rev().map(letter_inverse).collect();
        encode_list(&w)
    }

    /// Code of the one-letter word `gen` (or its inverse).
    pub fn generator_code(id: u64, inverse: bool) -> Option<u64> {
        encode_list(&[2 * id + inverse as u64])
    }

    fn connects_in_one_move(&self, a: u64, b: u64) -> bool {
        self.carrier.contains(&a)
            && self
                .generators
                .values()
                .any(|p| p.get(&a) == Some(&b) || p.get(&b) == Some(&a))
    }

    fn union_find(&self) -> UnionFind {
        let mut uf = UnionFind::default();
        for perm in self.generators.values() {
            for (&a, &b) in perm {
                uf.union(a, b);
            }
        }
        uf
    }

    pub fn same_orbit(&self, a: u64, b: u64) -> bool {
        self.carrier.contains(&a) && self.carrier.contains(&b) && self.union_find().same(a, b)
    }

    pub fn orbits(&self) -> BTreeMap<u64, BTreeSet<u64>> {
        let mut uf = self.union_find();
        let mut out: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for &a in &self.carrier {
            out.entry(uf.find(a)).or_default().insert(a);
        }
        out
    }

    /// Edge ids `<g,a>` of the generator-move graph for one-letter words.
    pub fn move_edge(&self, id: u64, a: u64) -> Option<u64> {
        try_pair(Self::generator_code(id, false)?, a)
    }

    pub fn universe(&self) -> u64 {
        let c = self.carrier.iter().copied().max().unwrap_or(0);
        let g = self.generators.keys().copied().max().unwrap_or(0);
        c.max(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_connectivity() {
        let g = GraphInstance::finite(Presentation::Subset, [0, 1, 2], vec![Edge::new(0, 1)]);
        assert!(g.is_disconnected().unwrap());
        assert!(g.connected(0, 1).unwrap());
        assert!(!g.connected(0, 2).unwrap());
    }

    #[test]
    fn column_paths_join_the_hub_when_cut() {
        let cuts = Cuts {
            exceptions: [(0, Some(3))].into_iter().collect(),
            default: super::super::family::CutDefault::Never,
        };
        let g = GraphInstance {
            presentation: Presentation::Subset,
            body: GraphBody::ColumnPaths { cuts },
        };
        assert!(g.adjacent(path_vertex(0, 3), HUB).unwrap());
        assert!(!g.has_vertex(path_vertex(0, 4)).unwrap());
        assert!(g.connected(path_vertex(0, 0), HUB).unwrap());
        assert!(!g.connected(path_vertex(1, 0), HUB).unwrap());
        assert!(g.adjacent(path_vertex(1, 5), path_vertex(1, 6)).unwrap());
    }

    #[test]
    fn free_group_words() {
        let act = ActionInstance::trivial([0, 1, 2]).with_generator(0, [(0, 1), (1, 0)]);
        let g = ActionInstance::generator_code(0, false).unwrap();
        let gi = ActionInstance::generator_code(0, true).unwrap();
        assert_eq!(act.multiply(g, gi), Some(0));
        assert_eq!(act.inverse(g), Some(gi));
        assert_eq!(act.act(g, 0), 1);
        assert_eq!(act.act(g, 2), 2);
        assert!(act.same_orbit(0, 1));
        assert!(!act.same_orbit(0, 2));
        assert!(!act.is_element(encode_list(&[0, 1]).unwrap()));
    }

    #[test]
    fn subdivision_midpoints() {
        let base = GraphInstance::finite(Presentation::Function, [1, 2], vec![Edge::with_id(0, 1, 2)]);
        let sub = GraphInstance {
            presentation: Presentation::Subset,
            body: GraphBody::Subdivided { base: Box::new(base) },
        };
        let mid = 2 * crate::coding::triple(1, 2, 0) + 1;
        assert!(sub.adjacent(2, mid).unwrap());
        assert!(sub.adjacent(mid, 4).unwrap());
        assert!(!sub.adjacent(2, 4).unwrap());
        assert!(sub.connected(2, 4).unwrap());
    }
}
