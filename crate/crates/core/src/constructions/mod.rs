//! Deterministic generators for the explicit set/graph pairs.
//!
//! Every generator returns a [`ConstructionOutput`]: the value set, the graph
//! on its indices, and a per-vertex witness from which each value can be
//! recomputed.

mod blowup;
mod matching;
mod projection;
mod ruzsa;
mod sumprod;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exactnum::BigRat;
use crate::setgraph::{EdgeGraph, ValueSet};

pub use blowup::{
    build_blowup, build_blowup_restricted, build_blowup_with_relation, compute_alpha_beta, AlphaBeta,
    BlowupWitness, RestrictedTargets, ZETA_RETRY_BUDGET,
};
pub use matching::{build_matching, MatchingWitness};
pub use projection::{build_projection, PowerDifference};
pub use ruzsa::{
    build_ruzsa_digits, decode_difference, decode_sum, digit_match_pair_count, ruzsa_tail, RUZSA_BASE,
    RUZSA_DIGITS, RUZSA_MAX_K,
};
pub use sumprod::{
    build_case1, build_case2, build_sumprod, build_sumprod_with, Case2Stages, SumprodLattice, SumprodTriple,
};

/// Which generator produced an output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    Sumprod,
    Case1,
    Case2,
    Projection,
    Matching,
    Ruzsa,
    Blowup,
    BlowupRestricted,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 8] = [
        ConstructionKind::Sumprod,
        ConstructionKind::Case1,
        ConstructionKind::Case2,
        ConstructionKind::Projection,
        ConstructionKind::Matching,
        ConstructionKind::Ruzsa,
        ConstructionKind::Blowup,
        ConstructionKind::BlowupRestricted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::Sumprod => "sumprod",
            ConstructionKind::Case1 => "case1",
            ConstructionKind::Case2 => "case2",
            ConstructionKind::Projection => "projection",
            ConstructionKind::Matching => "matching",
            ConstructionKind::Ruzsa => "ruzsa",
            ConstructionKind::Blowup => "blowup",
            ConstructionKind::BlowupRestricted => "blowup-restricted",
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ConstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstructionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("construction", format!("unknown construction {s:?}")))
    }
}

/// Per-vertex witnesses, aligned with the value set's order.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Triples(Vec<SumprodTriple>),
    PowerDifferences(Vec<PowerDifference>),
    Matching(Vec<MatchingWitness>),
    Digits(Vec<Vec<u8>>),
    Blowup { zeta: BigRat, witnesses: Vec<BlowupWitness> },
}

impl Provenance {
    pub fn len(&self) -> usize {
        match self {
            Provenance::Triples(v) => v.len(),
            Provenance::PowerDifferences(v) => v.len(),
            Provenance::Matching(v) => v.len(),
            Provenance::Digits(v) => v.len(),
            Provenance::Blowup { witnesses, .. } => witnesses.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Value described by witness `i`.
    pub fn reconstruct(&self, i: usize) -> BigRat {
        match self {
            Provenance::Triples(v) => v[i].value(),
            Provenance::PowerDifferences(v) => v[i].value(),
            Provenance::Matching(v) => v[i].value(),
            Provenance::Digits(v) => {
                let mut acc = BigInt::from(0u8);
                for &d in v[i].iter().rev() {
                    acc = acc * RUZSA_BASE + d;
                }
                BigRat::from_bigint(acc)
            }
            Provenance::Blowup { zeta, witnesses } => witnesses[i].value(zeta),
        }
    }
}

/// A generated set, its graph, and the audit trail for each vertex.
#[derive(Clone, Debug)]
pub struct ConstructionOutput {
    pub kind: ConstructionKind,
    /// Exact input and derived parameters, rendered as text.
    pub params: BTreeMap<String, String>,
    pub set: ValueSet,
    pub graph: EdgeGraph,
    pub provenance: Provenance,
    /// Construction-specific measurements (pruning stages, formula targets).
    pub details: BTreeMap<String, serde_json::Value>,
}

impl ConstructionOutput {
    /// Recompute every vertex from its witness.
    pub fn verify_witnesses(&self) -> Result<()> {
        if self.provenance.len() != self.set.len() {
            return Err(Error::Collision(format!(
                "{} witnesses for {} vertices",
                self.provenance.len(),
                self.set.len()
            )));
        }
        for (i, v) in self.set.iter().enumerate() {
            let w = self.provenance.reconstruct(i);
            if w != *v {
                return Err(Error::Collision(format!("vertex {i} is {v} but its witness gives {w}")));
            }
        }
        Ok(())
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

/// Build the set from `(value, witness)` pairs, failing on any duplicate value.
/// Returns the set, the witnesses in set order, and the set index of each input.
pub(crate) fn index_distinct<W: Clone>(items: Vec<(BigRat, W)>) -> Result<(ValueSet, Vec<W>, Vec<u32>)> {
    let n = items.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| items[a].0.cmp(&items[b].0));
    if let Some(w) = order.windows(2).find(|w| items[w[0]].0 == items[w[1]].0) {
        return Err(Error::Collision(format!("inputs {} and {} both equal {}", w[0], w[1], items[w[0]].0)));
    }
    let mut position = vec![0u32; n];
    for (rank, &i) in order.iter().enumerate() {
        position[i] = rank as u32;
    }
    let witnesses = order.iter().map(|&i| items[i].1.clone()).collect();
    let values = order.iter().map(|&i| items[i].0.clone()).collect();
    let set = ValueSet::from_distinct(values)?;
    Ok((set, witnesses, position))
}

pub(crate) fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
