//! A perfect matching whose sums are the primes `p_i` and whose
//! large-to-small quotients are `q_j − 1`.

use serde::{Deserialize, Serialize};

use super::{index_distinct, params, ConstructionKind, ConstructionOutput, Provenance};
use crate::error::{invalid, Result};
use crate::exactnum::{first_primes, BigRat};
use crate::setgraph::EdgeGraph;

/// Witness for `p/q` (small end) or `(q − 1)p/q` (large end).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchingWitness {
    pub p: u64,
    pub q: u64,
    pub large: bool,
}

impl MatchingWitness {
    pub fn value(&self) -> BigRat {
        let factor = if self.large { self.q - 1 } else { 1 };
        BigRat::frac((factor * self.p) as i64, self.q as i64)
    }
}

/// `p` = primes 1..k, `q` = primes k+1..2k; edges `{p_i/q_j, (q_j−1)p_i/q_j}`.
pub fn build_matching(k: usize) -> Result<ConstructionOutput> {
    if k == 0 {
        return Err(invalid("k", "k must be at least 1"));
    }
    let primes = first_primes(2 * k);
    let (ps, qs) = primes.split_at(k);
    let mut items = Vec::with_capacity(2 * k * k);
    for &p in ps {
        for &q in qs {
            for large in [false, true] {
                let w = MatchingWitness { p, q, large };
                items.push((w.value(), w));
            }
        }
    }
    // index_distinct aborts on any coincidence between the 2k² values
    let (set, witnesses, position) = index_distinct(items)?;
    let edges = (0..k * k).map(|e| (position[2 * e], position[2 * e + 1])).collect();
    let graph = EdgeGraph::from_edges(set.len(), edges)?;
    Ok(ConstructionOutput {
        kind: ConstructionKind::Matching,
        params: params([("k", k.to_string())]),
        set,
        graph,
        provenance: Provenance::Matching(witnesses),
        details: Default::default(),
    })
}
