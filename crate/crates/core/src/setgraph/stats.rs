//! Distinct-value counting along edges.
//!
//! Values are gathered as compact keys, sorted, and run-length counted. Any
//! split of the input into chunks, merged in any order, yields the same sorted
//! key sequence, so parallel and serial runs agree exactly.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EdgeGraph, ValueSet};
use crate::error::{invalid, Error, Result};
use crate::exactnum::{BigRat, ValueKey};

/// Binary operation evaluated along an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sum,
    Product,
    Ratio,
    Difference,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Sum, Mode::Product, Mode::Ratio, Mode::Difference];

    /// `a ∘ b`. Panics for a zero divisor in ratio mode.
    pub fn apply(self, a: &BigRat, b: &BigRat) -> BigRat {
        match self {
            Mode::Sum => a + b,
            Mode::Product => a * b,
            Mode::Ratio => a / b,
            Mode::Difference => a - b,
        }
    }

    /// Number of values an unordered edge contributes.
    pub fn orientations(self) -> u64 {
        match self {
            Mode::Sum | Mode::Product => 1,
            Mode::Ratio | Mode::Difference => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sum => "sum",
            Mode::Product => "product",
            Mode::Ratio => "ratio",
            Mode::Difference => "difference",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "add" => Ok(Mode::Sum),
            "product" | "mul" => Ok(Mode::Product),
            "ratio" | "div" => Ok(Mode::Ratio),
            "difference" | "sub" => Ok(Mode::Difference),
            _ => Err(invalid("mode", format!("unknown mode {s:?}"))),
        }
    }
}

/// Distinct count and multiplicity histogram of the values along edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeValueStats {
    pub mode: Mode,
    /// Number of evaluated (edge, orientation) events.
    pub events: u64,
    #[serde(rename = "distinct")]
    pub distinct_count: u64,
    /// multiplicity → number of distinct values with that multiplicity
    pub histogram: BTreeMap<u64, u64>,
    #[serde(rename = "max_abs")]
    pub max_abs_value: Option<BigRat>,
    /// Every value along the edges is an integer.
    pub all_integer: bool,
}

/// Collects values for one mode; see the module docs for the merge contract.
#[derive(Clone, Debug)]
pub struct EdgeStatsAccumulator {
    mode: Mode,
    small: Vec<(i64, u64)>,
    big: Vec<BigRat>,
}

impl EdgeStatsAccumulator {
    pub fn new(mode: Mode) -> Self {
        EdgeStatsAccumulator { mode, small: Vec::new(), big: Vec::new() }
    }

    pub fn with_capacity(mode: Mode, cap: usize) -> Self {
        EdgeStatsAccumulator { mode, small: Vec::with_capacity(cap), big: Vec::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn events(&self) -> u64 {
        (self.small.len() + self.big.len()) as u64
    }

    pub fn push_value(&mut self, v: BigRat) {
        match v.as_small() {
            Some(p) => self.small.push(p),
            None => self.big.push(v),
        }
    }

    /// Evaluate an unordered edge `{a, b}` (one or two events depending on mode).
    pub fn push_edge(&mut self, a: &BigRat, b: &BigRat) {
        self.push_value(self.mode.apply(a, b));
        if self.mode.orientations() == 2 {
            self.push_value(self.mode.apply(b, a));
        }
    }

    pub fn merge(&mut self, mut other: EdgeStatsAccumulator) {
        assert_eq!(self.mode, other.mode, "merging accumulators of different modes");
        self.small.append(&mut other.small);
        self.big.append(&mut other.big);
    }

    /// Distinct values with their event counts, in key order.
    fn into_runs(mut self) -> Vec<(ValueKey, u64)> {
        self.big.par_sort_unstable();
        let mut runs = Vec::new();
        if self.small.iter().all(|&(_, d)| d == 1) {
            let mut nums: Vec<i64> = self.small.iter().map(|&(n, _)| n).collect();
            drop(std::mem::take(&mut self.small));
            nums.par_sort_unstable();
            runs.extend(nums.chunk_by(|x, y| x == y).map(|r| (ValueKey::Small(r[0], 1), r.len() as u64)));
        } else {
            self.small.par_sort_unstable();
        }
        let mut i = 0;
        while i < self.small.len() {
            let mut j = i + 1;
            while j < self.small.len() && self.small[j] == self.small[i] {
                j += 1;
            }
            runs.push((ValueKey::Small(self.small[i].0, self.small[i].1), (j - i) as u64));
            i = j;
        }
        let mut i = 0;
        while i < self.big.len() {
            let mut j = i + 1;
            while j < self.big.len() && self.big[j] == self.big[i] {
                j += 1;
            }
            runs.push((ValueKey::Big(self.big[i].clone()), (j - i) as u64));
            i = j;
        }
        runs
    }

    pub fn finish(self) -> EdgeValueStats {
        let mode = self.mode;
        let events = self.events();
        let runs = self.into_runs();
        let mut histogram = BTreeMap::new();
        let mut max_abs: Option<BigRat> = None;
        let mut all_integer = true;
        for (key, count) in &runs {
            *histogram.entry(*count).or_insert(0) += 1;
            let v = BigRat::from_key(key).abs();
            all_integer &= v.is_integer();
            if max_abs.as_ref().is_none_or(|m| v > *m) {
                max_abs = Some(v);
            }
        }
        EdgeValueStats { mode, events, distinct_count: runs.len() as u64, histogram, max_abs_value: max_abs, all_integer }
    }

    /// Distinct values with their event counts, increasing by value.
    pub fn finish_frequencies(self) -> Vec<(BigRat, u64)> {
        // key order is value order when every value is an integer
        let integral = self.big.is_empty() && self.small.iter().all(|&(_, d)| d == 1);
        let mut out: Vec<(BigRat, u64)> = self.into_runs().into_iter().map(|(k, c)| (BigRat::from_key(&k), c)).collect();
        if !integral {
            out.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        }
        out
    }
}

const CHUNK: usize = 1 << 16;

fn check_inputs(set: &ValueSet, graph: &EdgeGraph, mode: Mode) -> Result<()> {
    if graph.vertex_count() != set.len() {
        return Err(invalid(
            "graph",
            format!("graph has {} vertices but set has {} values", graph.vertex_count(), set.len()),
        ));
    }
    if mode == Mode::Ratio && set.contains_zero() {
        return Err(Error::ZeroInSet("ratio"));
    }
    Ok(())
}

fn accumulate_edges(set: &ValueSet, edges: &[(u32, u32)], mode: Mode) -> EdgeStatsAccumulator {
    let parts: Vec<EdgeStatsAccumulator> = edges
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = EdgeStatsAccumulator::with_capacity(mode, chunk.len() * mode.orientations() as usize);
            for &(a, b) in chunk {
                acc.push_edge(&set[a as usize], &set[b as usize]);
            }
            acc
        })
        .collect();
    let mut acc = EdgeStatsAccumulator::with_capacity(mode, parts.iter().map(|p| p.small.len()).sum());
    for p in parts {
        acc.merge(p);
    }
    acc
}

/// Distinct values of `mode` along the edges of `graph`.
///
/// Sums and products are evaluated once per edge, ratios and differences in
/// both orientations. An edgeless graph yields empty statistics.
pub fn edge_stats(set: &ValueSet, graph: &EdgeGraph, mode: Mode) -> Result<EdgeValueStats> {
    check_inputs(set, graph, mode)?;
    Ok(accumulate_edges(set, graph.edges(), mode).finish())
}

/// Every distinct edge value with its number of occurrences, increasing by value.
pub fn edge_value_frequencies(set: &ValueSet, graph: &EdgeGraph, mode: Mode) -> Result<Vec<(BigRat, u64)>> {
    check_inputs(set, graph, mode)?;
    Ok(accumulate_edges(set, graph.edges(), mode).finish_frequencies())
}

/// One quotient per edge: the larger endpoint value over the smaller one.
pub fn large_over_small_stats(set: &ValueSet, graph: &EdgeGraph) -> Result<EdgeValueStats> {
    check_inputs(set, graph, Mode::Ratio)?;
    let mut acc = EdgeStatsAccumulator::new(Mode::Ratio);
    for &(a, b) in graph.edges() {
        // values are sorted, so index order is value order
        acc.push_value(&set[b as usize] / &set[a as usize]);
    }
    Ok(acc.finish())
}

fn pairwise_accumulator(set: &ValueSet, mode: Mode) -> Result<EdgeStatsAccumulator> {
    if mode == Mode::Ratio && set.contains_zero() {
        return Err(Error::ZeroInSet("ratio"));
    }
    let values = set.values();
    Ok(values
        .par_iter()
        .fold(
            || EdgeStatsAccumulator::new(mode),
            |mut acc, a| {
                for b in values {
                    acc.push_value(mode.apply(a, b));
                }
                acc
            },
        )
        .reduce(
            || EdgeStatsAccumulator::new(mode),
            |mut x, y| {
                x.merge(y);
                x
            },
        ))
}

/// Statistics of `a ∘ b` over all ordered pairs of `A × A`, diagonal included.
/// The distinct count is `|A+A|`, `|A·A|`, `|A/A|` or `|A−A|`.
pub fn pairwise_stats(set: &ValueSet, mode: Mode) -> Result<EdgeValueStats> {
    Ok(pairwise_accumulator(set, mode)?.finish())
}

/// Multiplicity `m(t)` of every `t = a ∘ b` over ordered pairs, increasing by `t`.
pub fn pairwise_frequencies(set: &ValueSet, mode: Mode) -> Result<Vec<(BigRat, u64)>> {
    Ok(pairwise_accumulator(set, mode)?.finish_frequencies())
}
