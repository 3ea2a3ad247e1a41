//! Reductions out of `Truth` and `HalfTruth`. Each builds a structure with
//! one piece per column `n` of the family; the piece changes shape from
//! the first stage at which `x_n` is seen to be nonzero.

use crate::coding::{pair, unpair, Bits};
use crate::error::Result;
use crate::instance::graph::{decode_path_vertex, path_vertex, HUB};
use crate::instance::order::column_element;
use crate::instance::{
    BottomedPosetInstance, CutDefault, Cuts, GraphBody, GraphInstance, Instance, LinearOrderInstance, Presentation,
    TreeInstance, Value,
};
use crate::problems::{Catalog, ProblemRef};
use crate::reduction::Reduction;
use crate::stream::StreamHandle;
use crate::witness::Witness;
use std::collections::BTreeMap;

#[derive(Clone, Copy)]
enum Shape {
    /// Disconnected paths joined to a hub when cut.
    Paths,
    /// Intervals `(n,0) < (n+1,0)` filled densely when cut.
    Order,
    /// Atoms above a bottom that gain a descending chain when cut.
    Bottomed,
    /// Branches `0^n 1^s` pruned at the cut.
    Tree,
}

impl Shape {
    fn build(self, cuts: Cuts) -> Instance {
        match self {
            Shape::Paths => Instance::Graph(GraphInstance {
                presentation: Presentation::Subset,
                body: GraphBody::ColumnPaths { cuts },
            }),
            Shape::Order => Instance::LinearOrder(LinearOrderInstance { fills: cuts }),
            Shape::Bottomed => Instance::BottomedPoset(BottomedPosetInstance { columns: cuts }),
            Shape::Tree => Instance::Tree(TreeInstance { branches: cuts }),
        }
    }

    /// Columns position `i` of the image depends on, each with the depth
    /// up to which its cut stage matters.
    fn touched(self, i: u64) -> Vec<(u64, u64)> {
        match self {
            Shape::Paths => {
                let vertices = if i % 2 == 0 {
                    vec![i / 2]
                } else {
                    let (a, b) = unpair(i / 2);
                    vec![a, b]
                };
                vertices.into_iter().filter_map(decode_path_vertex).collect()
            }
            Shape::Order => {
                let (a, b) = unpair(i);
                vec![unpair(a), unpair(b)]
            }
            Shape::Bottomed if i == 0 => Vec::new(),
            Shape::Bottomed => {
                let (a, b) = unpair(i - 1);
                [a, b].into_iter().filter(|&v| v > 0).map(|v| unpair(v - 1)).collect()
            }
            Shape::Tree => Bits::from_code(i)
                .as_branch()
                .map(|(n, s)| (n as u64, s as u64))
                .into_iter()
                .collect(),
        }
    }

    fn image(self, d: &Instance) -> Result<Instance> {
        Ok(self.build(d.expect_family()?.cuts()))
    }

    /// Reads just enough of each touched column to decide its cut up to
    /// the needed depth, then evaluates the image with those cuts; a column
    /// not cut by that depth behaves as never cut for this position.
    fn prefix(self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
        let x = x.memoized();
        (0..len)
            .map(|i| {
                let mut depths = BTreeMap::new();
                for (n, depth) in self.touched(i) {
                    let d = depths.entry(n).or_insert(depth);
                    *d = (*d).max(depth);
                }
                let mut exceptions = BTreeMap::new();
                for (n, depth) in depths {
                    let mut cut = None;
                    for k in 0..=depth {
                        if x.flag(pair(n, k))? {
                            cut = Some(k);
                            break;
                        }
                    }
                    exceptions.insert(n, cut);
                }
                self.build(Cuts {
                    exceptions,
                    default: CutDefault::Never,
                })
                .value_at(i)
            })
            .collect()
    }
}

macro_rules! column_reduction {
    ($name:ident, $id:literal, $source:expr, $target:expr, $shape:expr) => {
        impl Reduction for $name {
            fn id(&self) -> String {
                $id.into()
            }

            fn source(&self) -> ProblemRef {
                $source.arc()
            }

            fn target(&self) -> ProblemRef {
                $target.arc()
            }

            fn image(&self, d: &Instance, _horizon: u64) -> Result<Instance> {
                $shape.image(d)
            }

            fn image_prefix(&self, x: &StreamHandle, len: u64) -> Result<Vec<Value>> {
                $shape.prefix(x, len)
            }

            fn forward(&self, w: &Witness, _x: &StreamHandle) -> Result<Witness> {
                self.fwd(w)
            }

            fn backward(&self, v: &Witness, _x: &StreamHandle) -> Result<Witness> {
                self.bwd(v)
            }
        }
    };
}

/// Column `n` is a path `(n,0) - (n,1) - ...` that stops at the cut and
/// joins the hub there.
pub struct HalfTruthToDisConn;

column_reduction!(HalfTruthToDisConn, "halftruth_to_disconn", Catalog::HalfTruth, Catalog::DisConn, Shape::Paths);

impl HalfTruthToDisConn {
    fn fwd(&self, w: &Witness) -> Result<Witness> {
        let (n, m) = w.expect_pair("[a,b]")?;
        let other = if n == m { HUB } else { path_vertex(m, 0) };
        Ok(Witness::pair(path_vertex(n, 0), other))
    }

    fn bwd(&self, v: &Witness) -> Result<Witness> {
        let (a, b) = v.expect_pair("[a,b]")?;
        Ok(match (decode_path_vertex(a), decode_path_vertex(b)) {
            (Some((n, _)), Some((m, _))) => Witness::pair(n, m),
            (Some((n, _)), None) | (None, Some((n, _))) => Witness::pair(n, n),
            (None, None) => Witness::pair(0, 0),
        })
    }
}

/// Points `(n,0)` in order; from the cut on, the interval between `(n,0)`
/// and `(n+1,0)` is filled with a copy of the dyadic rationals.
pub struct TruthToNonDense;

column_reduction!(TruthToNonDense, "truth_to_nondense", Catalog::Truth, Catalog::NonDense, Shape::Order);

impl TruthToNonDense {
    fn fwd(&self, w: &Witness) -> Result<Witness> {
        let n = w.expect_nat("n")?;
        Ok(Witness::pair(pair(n, 0), pair(n + 1, 0)))
    }

    fn bwd(&self, v: &Witness) -> Result<Witness> {
        let (a, _) = v.expect_pair("[a,b]")?;
        Ok(Witness::Nat(unpair(a).0))
    }
}

/// Atoms `(n,0)` above a bottom; from the cut on, `(n,0)` gets a
/// descending chain below it and stops being an atom.
pub struct TruthToPoAtom;

column_reduction!(TruthToPoAtom, "truth_to_poatom", Catalog::Truth, Catalog::PoAtom, Shape::Bottomed);

impl TruthToPoAtom {
    fn fwd(&self, w: &Witness) -> Result<Witness> {
        Ok(Witness::Nat(column_element(w.expect_nat("n")?, 0)))
    }

    fn bwd(&self, v: &Witness) -> Result<Witness> {
        let a = v.expect_nat("n")?;
        Ok(Witness::Nat(if a == 0 { 0 } else { unpair(a - 1).0 }))
    }
}

/// The spine `0^∞` plus branches: `0^n 1^s` is in the tree while no
/// nonzero entry of `x_n` below `s` has been seen.
pub struct TruthToTr2;

column_reduction!(TruthToTr2, "truth_to_tr2", Catalog::Truth, Catalog::Tr2, Shape::Tree);

impl TruthToTr2 {
    fn fwd(&self, w: &Witness) -> Result<Witness> {
        let n = w.expect_nat("n")? as usize;
        Ok(Witness::tuple2(
            Witness::Bits(Bits::zeros(n + 1)),
            Witness::Bits(Bits::branch(n, 1)),
        ))
    }

    fn bwd(&self, v: &Witness) -> Result<Witness> {
        let (s, t) = v
            .as_bits_pair()
            .ok_or_else(|| v.schema_error("[b:sigma,b:tau]"))?;
        let branch = [s, t]
            .into_iter()
            .find_map(|b| b.as_branch().filter(|&(_, k)| k >= 1))
            .map_or(0, |(m, _)| m as u64);
        Ok(Witness::Nat(branch))
    }
}
