//! Signed differences of powers of two, joined when they share the
//! subtracted power. Sums along edges are `2^i − 2^k` and ratios are
//! `−(2^{i−j} − 1)/(2^{k−j} − 1)`, so both stay linear in the set size.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{index_distinct, params, ConstructionKind, ConstructionOutput, Provenance};
use crate::error::{invalid, Result};
use crate::exactnum::{isqrt, BigRat};
use crate::setgraph::EdgeGraph;

/// Witness for `±(2^i − 2^j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerDifference {
    pub negative: bool,
    pub i: u32,
    pub j: u32,
}

impl PowerDifference {
    pub fn value(&self) -> BigRat {
        let x = (BigInt::from(1u8) << self.i) - (BigInt::from(1u8) << self.j);
        BigRat::from_bigint(if self.negative { -x } else { x })
    }
}

/// `A = {±(2^i − 2^j) : 1 ≤ j < i ≤ s}` with `s = ⌊√n⌋`; `2^i − 2^j` is
/// adjacent to `−(2^k − 2^j)` for every `i, k > j`.
pub fn build_projection(n: u64) -> Result<ConstructionOutput> {
    let s = isqrt(n) as u32;
    if s < 2 {
        return Err(invalid("n", format!("⌊√{n}⌋ = {s} < 2")));
    }
    let mut items = Vec::new();
    // slot[(i, j, sign)] = position in `items`
    let slot = |i: u32, j: u32, neg: bool| -> usize {
        let base = ((i - 1) * (i - 2) / 2 + (j - 1)) as usize;
        2 * base + neg as usize
    };
    for i in 2..=s {
        for j in 1..i {
            for negative in [false, true] {
                let w = PowerDifference { negative, i, j };
                debug_assert_eq!(slot(i, j, negative), items.len());
                items.push((w.value(), w));
            }
        }
    }
    let (set, witnesses, position) = index_distinct(items)?;
    let mut edges = Vec::new();
    for j in 1..s {
        for i in j + 1..=s {
            for k in j + 1..=s {
                edges.push((position[slot(i, j, false)], position[slot(k, j, true)]));
            }
        }
    }
    let graph = EdgeGraph::from_edges(set.len(), edges)?;
    Ok(ConstructionOutput {
        kind: ConstructionKind::Projection,
        params: params([("n", n.to_string()), ("s", s.to_string())]),
        set,
        graph,
        provenance: Provenance::PowerDifferences(witnesses),
        details: Default::default(),
    })
}
