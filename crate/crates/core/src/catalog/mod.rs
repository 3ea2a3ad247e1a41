//! The concrete reductions between the catalog problems.

mod bounded;
mod columns;
mod graphs;
mod sequences;

pub use bounded::{BddNatToRat, BddRatToReal, BddRealToNat, BddSeqToPoTop, PoTopToBddSeq};
pub use columns::{HalfTruthToDisConn, TruthToNonDense, TruthToPoAtom, TruthToTr2};
pub use graphs::{DisConnFunToOrbit, DisConnFunToSub, DisConnSubToFun, OrbitToDisConnFun};
pub use sequences::{predictions, ConvToFin, FinToQPre, QPreToConv};

use crate::error::{Error, Result};
use crate::reduction::ReductionRef;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// What verification is expected to find.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Pass,
    Counterexample,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Pass => "pass",
            Expected::Counterexample => "counterexample",
        })
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// The statement the entry realizes.
    pub statement: &'static str,
    pub reduction: ReductionRef,
    pub expected: Expected,
}

fn entry(id: &'static str, statement: &'static str, reduction: ReductionRef) -> CatalogEntry {
    CatalogEntry {
        id,
        statement,
        reduction,
        expected: Expected::Pass,
    }
}

/// Every catalog reduction, in a fixed order.
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        entry("conv_to_fin", "Conv <=m Fin", Arc::new(ConvToFin)),
        entry("fin_to_qpre", "Fin <=m QPre", Arc::new(FinToQPre)),
        entry("qpre_to_conv", "QPre <=m Conv", Arc::new(QPreToConv)),
        entry("potop_to_bddseq", "PO_top <=m BddSeq", Arc::new(PoTopToBddSeq { literal: false })),
        CatalogEntry {
            id: "bddseq_to_potop",
            statement: "BddSeq <=m PO_top via record chains",
            reduction: Arc::new(BddSeqToPoTop),
            expected: Expected::Counterexample,
        },
        entry("bddseq_nat_to_rat", "BddSeq over naturals <=m over rationals", Arc::new(BddNatToRat)),
        entry("bddseq_rat_to_real", "BddSeq over rationals <=m over reals", Arc::new(BddRatToReal)),
        entry("bddseq_real_to_nat", "BddSeq over reals <=m over naturals", Arc::new(BddRealToNat)),
        entry("disconn_sub_to_fun", "DisConn <=m DisConn_fun", Arc::new(DisConnSubToFun)),
        entry("disconn_fun_to_sub", "DisConn_fun <=m DisConn", Arc::new(DisConnFunToSub)),
        entry("orbit_to_disconnfun", "Orbit <=m DisConn_fun", Arc::new(OrbitToDisConnFun)),
        entry("disconnfun_to_orbit", "DisConn_fun <=m Orbit", Arc::new(DisConnFunToOrbit)),
        entry("halftruth_to_disconn", "HalfTruth <=m DisConn", Arc::new(HalfTruthToDisConn)),
        entry("truth_to_nondense", "Truth <=m NonDense", Arc::new(TruthToNonDense)),
        entry("truth_to_poatom", "Truth <=m PO_atom", Arc::new(TruthToPoAtom)),
        entry("truth_to_tr2", "Truth <=m Tr2", Arc::new(TruthToTr2)),
    ]
}

/// The three embeddings among the bounded-sequence variants.
pub const BDDSEQ_EQUIVALENCES: [&str; 3] = ["bddseq_nat_to_rat", "bddseq_rat_to_real", "bddseq_real_to_nat"];

pub fn lookup(id: &str) -> Result<CatalogEntry> {
    entries().into_iter().find(|e| e.id == id).ok_or_else(|| Error::Unknown {
        kind: "reduction",
        name: id.to_string(),
    })
}

#[cfg(test)]
mod tests;
