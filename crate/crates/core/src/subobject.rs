//! Problems built from other problems: indexed unions of Π⁰₁ families,
//! intersections, pullbacks along instance maps, coproducts and halves.

use crate::error::Result;
use crate::family::Family;
use crate::instance::{Instance, Variant};
use crate::problems::{Problem, ProblemRef};
use crate::reduction::ReductionRef;
use crate::witness::Witness;
use std::sync::Arc;

/// `⊎_n A_n`: member iff some piece holds; witness the index.
pub struct Union {
    pub family: Family,
}

pub fn witnessed_union(family: Family) -> ProblemRef {
    Arc::new(Union { family })
}

impl Problem for Union {
    fn id(&self) -> String {
        format!("union({})", self.family)
    }

    fn accepts(&self, v: Variant) -> bool {
        v == self.family.variant()
    }

    fn schema(&self) -> String {
        "n".into()
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        self.check_variant(d)?;
        Ok(self.family.least_member(d)?.is_some())
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        self.check_variant(d)?;
        self.family.holds(w.expect_nat("n")?, d)
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        self.check_variant(d)?;
        let mut out = Vec::new();
        let mut next = self.family.next_member(d, 0)?;
        while let Some(n) = next.filter(|&n| n <= bound) {
            out.push(Witness::Nat(n));
            next = self.family.next_member(d, n + 1)?;
        }
        Ok(out)
    }
}

/// `A ⋒ B`: member of both; witness a pair of witnesses.
pub struct Intersection {
    pub a: ProblemRef,
    pub b: ProblemRef,
}

pub fn witnessed_intersection(a: ProblemRef, b: ProblemRef) -> ProblemRef {
    Arc::new(Intersection { a, b })
}

impl Problem for Intersection {
    fn id(&self) -> String {
        format!("meet({},{})", self.a.id(), self.b.id())
    }

    fn accepts(&self, v: Variant) -> bool {
        self.a.accepts(v) && self.b.accepts(v)
    }

    fn schema(&self) -> String {
        format!("[{},{}]", self.a.schema(), self.b.schema())
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        Ok(self.a.is_member(d)? && self.b.is_member(d)?)
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        let (p, q) = w.as_tuple2().ok_or_else(|| w.schema_error(&self.schema()))?;
        Ok(self.a.is_valid(d, p)? && self.b.is_valid(d, q)?)
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        let ps = self.a.witnesses_upto(d, bound)?;
        let qs = self.b.witnesses_upto(d, bound)?;
        Ok(ps
            .iter()
            .flat_map(|p| qs.iter().map(move |q| Witness::tuple2(p.clone(), q.clone())))
            .collect())
    }
}

/// `phi* B`: member iff `phi(x)` is a member of `B`; witnesses are `B`'s,
/// read on the image. Only the instance map of `phi` is used.
pub struct Pullback {
    pub phi: ReductionRef,
    pub target: ProblemRef,
    pub horizon: u64,
}

pub fn pullback(phi: ReductionRef, target: ProblemRef, horizon: u64) -> ProblemRef {
    Arc::new(Pullback { phi, target, horizon })
}

impl Problem for Pullback {
    fn id(&self) -> String {
        format!("pullback({},{})", self.phi.id(), self.target.id())
    }

    fn accepts(&self, v: Variant) -> bool {
        self.phi.source().accepts(v)
    }

    fn schema(&self) -> String {
        self.target.schema()
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        self.target.is_member(&self.phi.image(d, self.horizon)?)
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        self.target.is_valid(&self.phi.image(d, self.horizon)?, w)
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        self.target.witnesses_upto(&self.phi.image(d, self.horizon)?, bound)
    }
}

/// `A + B` over tagged instances; witness `[tag, w]`.
pub struct Coproduct {
    pub a: ProblemRef,
    pub b: ProblemRef,
}

impl Coproduct {
    pub fn new(a: ProblemRef, b: ProblemRef) -> Self {
        Coproduct { a, b }
    }

    pub fn id_str(&self) -> String {
        format!("{}+{}", self.a.id(), self.b.id())
    }

    pub fn side(&self, tag: u8) -> &ProblemRef {
        if tag == 0 {
            &self.a
        } else {
            &self.b
        }
    }

    fn split<'d>(&self, d: &'d Instance) -> Result<(u8, &'d Instance)> {
        match d {
            Instance::Tagged { tag, inner } if *tag <= 1 => Ok((*tag, inner)),
            other => Err(crate::error::Error::mismatch("tagged", other.variant().to_string())),
        }
    }
}

impl Problem for Coproduct {
    fn id(&self) -> String {
        self.id_str()
    }

    fn accepts(&self, v: Variant) -> bool {
        v == Variant::Tagged
    }

    fn schema(&self) -> String {
        "[tag,w]".into()
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        let (tag, inner) = self.split(d)?;
        self.side(tag).is_member(inner)
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        let (tag, inner) = self.split(d)?;
        let (t, v) = w.as_tuple2().ok_or_else(|| w.schema_error("[tag,w]"))?;
        let t = t.expect_nat("[tag,w]")?;
        Ok(t == tag as u64 && self.side(tag).is_valid(inner, v)?)
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        let (tag, inner) = self.split(d)?;
        Ok(self
            .side(tag)
            .witnesses_upto(inner, bound)?
            .into_iter()
            .map(|w| Witness::tuple2(Witness::Nat(tag as u64), w))
            .collect())
    }
}

/// `Half(psi)` for `psi = exists n (x in A_n)`: witness `(a,b)` valid iff
/// `x in A_a` or `x in A_b`.
pub struct Half {
    pub family: Family,
}

pub fn half_problem(family: Family) -> ProblemRef {
    Arc::new(Half { family })
}

impl Problem for Half {
    fn id(&self) -> String {
        format!("half({})", self.family)
    }

    fn accepts(&self, v: Variant) -> bool {
        v == self.family.variant()
    }

    fn schema(&self) -> String {
        "[a,b]".into()
    }

    fn is_member(&self, d: &Instance) -> Result<bool> {
        self.check_variant(d)?;
        Ok(self.family.least_member(d)?.is_some())
    }

    fn is_valid(&self, d: &Instance, w: &Witness) -> Result<bool> {
        self.check_variant(d)?;
        let (a, b) = w.expect_pair("[a,b]")?;
        Ok(self.family.holds(a, d)? || self.family.holds(b, d)?)
    }

    fn witnesses_upto(&self, d: &Instance, bound: u64) -> Result<Vec<Witness>> {
        self.check_variant(d)?;
        let good: Vec<bool> = (0..=bound).map(|n| self.family.holds(n, d)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                if good[a as usize] || good[b as usize] {
                    out.push(Witness::pair(a, b));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Tail;
    use crate::problems::Catalog;

    #[test]
    fn union_examples() {
        let fin = witnessed_union(Family::FinThreshold);
        let x = Instance::seq(vec![1], Tail::Const(0));
        assert!(fin.is_member(&x).unwrap());
        assert!(fin.is_valid(&x, &Witness::Nat(1)).unwrap());
        assert!(!fin.is_valid(&x, &Witness::Nat(0)).unwrap());
        assert!(!fin.is_member(&Instance::seq(vec![], Tail::Ramp)).unwrap());
        let bdd = witnessed_union(Family::BoundedBelow);
        assert!(bdd.is_valid(&Instance::seq(vec![2], Tail::Const(1)), &Witness::Nat(3)).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let meet = witnessed_intersection(Catalog::Fin.arc(), Catalog::Conv.arc());
        let x = Instance::seq(vec![5], Tail::Const(0));
        assert!(meet.is_valid(&x, &Witness::pair(1, 1)).unwrap());
        assert!(!meet.is_valid(&x, &Witness::pair(1, 0)).unwrap());
        assert!(!meet.is_member(&Instance::seq(vec![], Tail::Ramp)).unwrap());
    }

    #[test]
    fn coproduct_membership_follows_the_tag() {
        let sum = Coproduct::new(Catalog::Fin.arc(), Catalog::BddSeq.arc());
        let d = Instance::Tagged {
            tag: 0,
            inner: Box::new(Instance::seq(vec![1], Tail::Const(0))),
        };
        assert!(sum.is_member(&d).unwrap());
        let w = Witness::tuple2(Witness::Nat(0), Witness::Nat(1));
        assert!(sum.is_valid(&d, &w).unwrap());
        let ramp = Instance::Tagged {
            tag: 1,
            inner: Box::new(Instance::seq(vec![], Tail::Ramp)),
        };
        assert!(!sum.is_member(&ramp).unwrap());
    }

    #[test]
    fn half_is_disjunctive() {
        let half = half_problem(Family::Normalized(crate::family::BinaryMatrix::ZeroAt));
        let x = Instance::seq(vec![1], Tail::Const(0));
        assert!(half.is_valid(&x, &Witness::pair(1, 5)).unwrap());
        assert!(half.is_valid(&x, &Witness::pair(1, 1)).unwrap());
        assert!(!half.is_valid(&x, &Witness::pair(0, 5)).unwrap());
    }
}
