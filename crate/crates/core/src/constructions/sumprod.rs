//! Sets of values `uw/v` with few sums and few products along a dense graph.
//!
//! For a bound `t` on `v, w` and a bound `U` on `u`, the set holds every
//! `uw/v` with `v, w ≤ t` coprime, `u ≤ U` and every prime factor of `u`
//! above `t`. Vertices `uw/v` and `vz/w` are adjacent. Products along edges
//! are the integers `uz`; sums are `(w²u + v²z)/(vw)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{index_distinct, params, ConstructionKind, ConstructionOutput, Provenance};
use crate::energy::prune_by_popularity;
use crate::error::{invalid, Error, Result};
use crate::exactnum::{coprime, floor_pow, BigRat, PrimeTable};
use crate::setgraph::{edge_stats, sort_pairs, EdgeGraph, Mode};

/// Witness `(u, v, w)` for the vertex `uw/v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumprodTriple {
    pub u: u64,
    pub v: u64,
    pub w: u64,
}

impl SumprodTriple {
    pub fn value(&self) -> BigRat {
        BigRat::frac((self.u * self.w) as i64, self.v as i64)
    }
}

/// The index space of a sumprod-type construction: admissible `u` values and
/// ordered coprime pairs `(v, w)`. Edges can be streamed without building the
/// graph, which is how edge counts are taken at sizes where the edge list
/// would not fit in memory.
#[derive(Clone, Debug)]
pub struct SumprodLattice {
    n: u64,
    pair_bound: u64,
    u_bound: u64,
    us: Vec<u64>,
    pairs: Vec<(u64, u64)>,
    reverse: Vec<usize>,
}

/// Largest unreduced sum numerator and denominator seen along the edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumAudit {
    pub max_numerator: u64,
    pub max_denominator: u64,
    pub max_product: u64,
}

impl SumprodLattice {
    /// Lattice with `v, w ≤ pair_bound`, `u ≤ u_bound` and `lpf(u) > pair_bound`.
    pub fn new(n: u64, pair_bound: u64, u_bound: u64, include_one: bool) -> Result<Self> {
        if pair_bound < 2 {
            return Err(invalid("n", format!("pair bound {pair_bound} < 2; ranges are degenerate")));
        }
        if u_bound < 1 {
            return Err(invalid("n", "u bound is zero"));
        }
        let table = PrimeTable::new(u_bound);
        let mut us = Vec::new();
        for u in 1..=u_bound {
            if u == 1 && !include_one {
                continue;
            }
            if table.lpf(u)?.exceeds(pair_bound) {
                us.push(u);
            }
        }
        let mut pairs = Vec::new();
        for v in 1..=pair_bound {
            for w in 1..=pair_bound {
                if coprime(v, w)? {
                    pairs.push((v, w));
                }
            }
        }
        let pos: HashMap<(u64, u64), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let reverse = pairs.iter().map(|&(v, w)| pos[&(w, v)]).collect();
        Ok(SumprodLattice { n, pair_bound, u_bound, us, pairs, reverse })
    }

    /// `v, w ≤ ⌊n^{1/6}⌋`, `u ≤ ⌊n^{2/3}⌋`.
    pub fn for_sumprod(n: u64, include_one: bool) -> Result<Self> {
        if n < 64 {
            return Err(invalid("n", format!("n = {n} < 64 makes ⌊n^(1/6)⌋ < 2")));
        }
        let t = floor_pow(n, &BigRat::frac(1, 6))?;
        let u = floor_pow(n, &BigRat::frac(2, 3))?;
        Self::new(n, t, u, include_one)
    }

    /// `v, w ≤ ⌊n^{(1−c)/2}⌋`, `u ≤ ⌊n^c⌋`, for `2/3 < c < 1`.
    pub fn for_case1(n: u64, c: &BigRat, include_one: bool) -> Result<Self> {
        if *c <= BigRat::frac(2, 3) || *c >= BigRat::one() {
            return Err(invalid("c", format!("{c} is outside (2/3, 1)")));
        }
        let half_gap = (BigRat::one() - c) * BigRat::frac(1, 2);
        let t = floor_pow(n, &half_gap)?;
        let u = floor_pow(n, c)?;
        Self::new(n, t, u, include_one)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn pair_bound(&self) -> u64 {
        self.pair_bound
    }

    pub fn u_bound(&self) -> u64 {
        self.u_bound
    }

    pub fn us(&self) -> &[u64] {
        &self.us
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn triple_count(&self) -> usize {
        self.us.len() * self.pairs.len()
    }

    pub fn triple(&self, t: usize) -> SumprodTriple {
        let (v, w) = self.pairs[t / self.us.len()];
        SumprodTriple { u: self.us[t % self.us.len()], v, w }
    }

    /// Calls `f(a, b)` once per unordered edge, with triple indices `a` for
    /// `uw/v` and `b` for `vz/w`. Each pair `(v, w)` and its reverse describe
    /// the same edges, so only `v < w` is walked, plus `u < z` on `v = w = 1`.
    pub fn for_each_edge(&self, mut f: impl FnMut(usize, usize)) {
        let nu = self.us.len();
        for (pi, &(v, w)) in self.pairs.iter().enumerate() {
            let ri = self.reverse[pi];
            if v > w {
                continue;
            }
            let diagonal = v == w;
            for iu in 0..nu {
                let start = if diagonal { iu + 1 } else { 0 };
                for iz in start..nu {
                    f(pi * nu + iu, ri * nu + iz);
                }
            }
        }
    }

    /// Edge count by streaming enumeration.
    pub fn edge_count(&self) -> u64 {
        let mut count = 0u64;
        self.for_each_edge(|_, _| count += 1);
        count
    }

    /// `(C·|U|² − |U|)/2` when `u = 1` is admissible (loops only on `v = w = 1`).
    pub fn closed_form_edge_count(&self) -> u64 {
        let c = self.pairs.len() as u64;
        let u = self.us.len() as u64;
        (c * u * u - u) / 2
    }

    /// Walks every edge once, tracking the raw sum numerator and denominator.
    pub fn audit_sums(&self) -> SumAudit {
        let mut audit = SumAudit::default();
        self.for_each_edge(|a, b| {
            let x = self.triple(a);
            let y = self.triple(b);
            // x = uw/v, y = z v/w with y.v = w, y.w = v
            let num = x.w * x.w * x.u + x.v * x.v * y.u;
            let den = x.v * x.w;
            audit.max_numerator = audit.max_numerator.max(num);
            audit.max_denominator = audit.max_denominator.max(den);
            audit.max_product = audit.max_product.max(x.u * y.u);
        });
        audit
    }

    fn materialize(&self, kind: ConstructionKind, mut params: BTreeMap<String, String>) -> Result<ConstructionOutput> {
        let items: Vec<(BigRat, SumprodTriple)> = (0..self.triple_count())
            .map(|t| {
                let tr = self.triple(t);
                (tr.value(), tr)
            })
            .collect();
        let (set, witnesses, position) = index_distinct(items)?;
        let mut edges = Vec::with_capacity(self.closed_form_edge_count() as usize);
        self.for_each_edge(|a, b| {
            let (x, y) = (position[a], position[b]);
            edges.push((x.min(y), x.max(y)));
        });
        sort_pairs(&mut edges);
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        let graph = EdgeGraph::from_sorted_unchecked(set.len(), edges);
        params.insert("pair_bound".into(), self.pair_bound.to_string());
        params.insert("u_bound".into(), self.u_bound.to_string());
        params.insert("u_count".into(), self.us.len().to_string());
        params.insert("pair_count".into(), self.pairs.len().to_string());
        let audit = self.audit_sums();
        let mut details = BTreeMap::new();
        details.insert("sum_audit".into(), serde_json::to_value(audit).expect("audit serializes"));
        Ok(ConstructionOutput { kind, params, set, graph, provenance: Provenance::Triples(witnesses), details })
    }
}

/// The sumprod construction at size parameter `n`.
pub fn build_sumprod(n: u64) -> Result<ConstructionOutput> {
    build_sumprod_with(n, true)
}

/// As [`build_sumprod`], optionally excluding `u = 1`.
pub fn build_sumprod_with(n: u64, include_one: bool) -> Result<ConstructionOutput> {
    let lattice = SumprodLattice::for_sumprod(n, include_one)?;
    lattice.materialize(
        ConstructionKind::Sumprod,
        params([("n", n.to_string()), ("include_one", include_one.to_string())]),
    )
}

/// Sumprod with exponent `c ∈ (2/3, 1)`: `v, w ≤ n^{(1−c)/2}`, `u ≤ n^c`.
pub fn build_case1(n: u64, c: &BigRat) -> Result<ConstructionOutput> {
    let lattice = SumprodLattice::for_case1(n, c, true)?;
    lattice.materialize(ConstructionKind::Case1, params([("n", n.to_string()), ("c", c.to_string())]))
}

/// Measurements from the two popularity prunings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case2Stages {
    /// `p = n^{c/2 − 1/3}`
    pub p: f64,
    /// `T = ⌈p · m^{4/3}⌉`
    pub threshold: u64,
    pub input_edges: u64,
    pub input_distinct_products: u64,
    pub input_distinct_sums: u64,
    pub after_products_edges: u64,
    pub after_products_distinct_products: u64,
    pub after_products_distinct_sums: u64,
    pub output_edges: u64,
    pub output_distinct_products: u64,
    pub output_distinct_sums: u64,
    /// `p² · m^{5/3}`, the predicted edge-count trend
    pub edge_trend: f64,
}

/// Prune the sumprod graph to its `T` most popular products, then to the `T`
/// most popular sums of what survives, for `c ∈ (0, 2/3]`.
pub fn build_case2(n: u64, c: &BigRat) -> Result<ConstructionOutput> {
    if !c.is_positive() || *c > BigRat::frac(2, 3) {
        return Err(invalid("c", format!("{c} is outside (0, 2/3]")));
    }
    let base = build_sumprod(n)?;
    let m = base.set.len() as f64;
    let exponent = c.to_f64() / 2.0 - 1.0 / 3.0;
    let p = if c == &BigRat::frac(2, 3) { 1.0 } else { (n as f64).powf(exponent) };
    let threshold = (p * m.powf(4.0 / 3.0)).ceil() as u64;
    if threshold == 0 {
        return Err(invalid("c", "popularity threshold T is zero"));
    }
    let count = |g: &EdgeGraph, mode| edge_stats(&base.set, g, mode).map(|s| s.distinct_count);
    let input = &base.graph;
    let after_products = prune_by_popularity(&base.set, input, Mode::Product, threshold)?;
    let output = prune_by_popularity(&base.set, &after_products, Mode::Sum, threshold)?;
    let stages = Case2Stages {
        p,
        threshold,
        input_edges: input.edge_count() as u64,
        input_distinct_products: count(input, Mode::Product)?,
        input_distinct_sums: count(input, Mode::Sum)?,
        after_products_edges: after_products.edge_count() as u64,
        after_products_distinct_products: count(&after_products, Mode::Product)?,
        after_products_distinct_sums: count(&after_products, Mode::Sum)?,
        output_edges: output.edge_count() as u64,
        output_distinct_products: count(&output, Mode::Product)?,
        output_distinct_sums: count(&output, Mode::Sum)?,
        edge_trend: p * p * m.powf(5.0 / 3.0),
    };
    let mut out = base;
    out.kind = ConstructionKind::Case2;
    out.params.insert("c".into(), c.to_string());
    out.params.insert("threshold".into(), threshold.to_string());
    out.details.insert("stages".into(), json!(stages));
    out.graph = output;
    Ok(out)
}
