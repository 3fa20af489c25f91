//! Additive and multiplicative energy, multiplicity spectra, dyadic level-set
//! extraction, and popularity pruning of edge sets.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BigRat, ValueKey};
use crate::setgraph::{
    edge_value_frequencies, pairwise_frequencies, pairwise_stats, EdgeGraph, EdgeStatsAccumulator, Mode, ValueSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMode {
    Additive,
    Multiplicative,
}

impl EnergyMode {
    /// Mode giving `t = a − b` or `t = a / b`.
    pub fn quotient_mode(self) -> Mode {
        match self {
            EnergyMode::Additive => Mode::Difference,
            EnergyMode::Multiplicative => Mode::Ratio,
        }
    }

    /// Mode giving `A+A` or `A·A`.
    pub fn sumset_mode(self) -> Mode {
        match self {
            EnergyMode::Additive => Mode::Sum,
            EnergyMode::Multiplicative => Mode::Product,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnergyMode::Additive => "additive",
            EnergyMode::Multiplicative => "multiplicative",
        }
    }
}

impl std::str::FromStr for EnergyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "additive" | "add" | "sum" => Ok(EnergyMode::Additive),
            "multiplicative" | "mul" | "product" => Ok(EnergyMode::Multiplicative),
            _ => Err(crate::error::invalid("mode", format!("unknown energy mode {s:?}"))),
        }
    }
}

fn check_mode(set: &ValueSet, mode: EnergyMode) -> Result<()> {
    if mode == EnergyMode::Multiplicative && set.contains_zero() {
        return Err(Error::ZeroInSet("multiplicative energy"));
    }
    Ok(())
}

/// `m(t)` over all ordered pairs of `A²`, diagonal included, sorted by `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicitySpectrum {
    pub mode: EnergyMode,
    pub entries: Vec<(BigRat, u64)>,
}

impl MultiplicitySpectrum {
    pub fn new(set: &ValueSet, mode: EnergyMode) -> Result<Self> {
        check_mode(set, mode)?;
        let entries = pairwise_frequencies(set, mode.quotient_mode())?;
        Ok(MultiplicitySpectrum { mode, entries })
    }

    pub fn get(&self, t: &BigRat) -> u64 {
        self.entries.binary_search_by(|(v, _)| v.cmp(t)).map(|i| self.entries[i].1).unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn energy(&self) -> u128 {
        self.entries.iter().map(|&(_, m)| m as u128 * m as u128).sum()
    }

    /// `m(t) = m(−t)` or `m(t) = m(1/t)` for every entry.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(t, m)| {
            let mirror = match self.mode {
                EnergyMode::Additive => -t,
                EnergyMode::Multiplicative => t.recip().expect("0 is excluded"),
            };
            self.get(&mirror) == *m
        })
    }
}

/// Number of ordered quadruples with `a + b = c + d` (resp. `ab = cd`).
pub fn energy(set: &ValueSet, mode: EnergyMode) -> Result<u128> {
    Ok(MultiplicitySpectrum::new(set, mode)?.energy())
}

fn level_of(m: u64) -> u32 {
    63 - m.leading_zeros()
}

/// The heaviest dyadic level of the spectrum and the pairs it covers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicExtraction {
    pub mode: EnergyMode,
    pub n: u64,
    /// `|A+A|` or `|A·A|`.
    pub sumset_size: u64,
    /// `sumset_size / n`.
    pub k_ratio: BigRat,
    pub energy: u128,
    /// `S_k` for every level `k = 0..L`.
    pub level_sums: Vec<u128>,
    pub level: u32,
    pub level_sum: u128,
    pub t_values: Vec<(BigRat, u64)>,
    pub m: u64,
    /// Ordered pairs `(a, b)` of set indices with `a∘b⁻¹ ∈ T`.
    #[serde(skip)]
    pub relation: Vec<(u32, u32)>,
    pub ordered_pair_count: u64,
    pub unordered_edge_count: u64,
    pub log_levels: u32,
}

/// Pass/fail of each extraction inequality, in exact integer form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionChecks {
    pub energy_lower: bool,
    pub pigeonhole: bool,
    pub edge_lower: bool,
    pub m_lower: bool,
    pub m_upper: bool,
    pub per_element: bool,
    pub symmetric: bool,
}

impl ExtractionChecks {
    pub fn all(&self) -> bool {
        self.energy_lower
            && self.pigeonhole
            && self.edge_lower
            && self.m_lower
            && self.m_upper
            && self.per_element
            && self.symmetric
    }
}

/// Every `a ∘ b⁻¹`, row-major. Integer sets of moderate size use packed
/// machine keys.
enum PairTable {
    Integer { values: Vec<i64>, keys: Vec<(i64, u64)> },
    General { rows: Vec<Vec<BigRat>> },
}

impl PairTable {
    fn new(set: &ValueSet, mode: EnergyMode) -> Self {
        let ints: Option<Vec<i64>> = set
            .values()
            .iter()
            .map(|v| match v.as_small() {
                Some((x, 1)) if x.unsigned_abs() < 1 << 62 => Some(x),
                _ => None,
            })
            .collect();
        if let Some(values) = ints {
            let n = values.len();
            let keys = (0..n * n)
                .into_par_iter()
                .map(|idx| integer_quotient(mode, values[idx / n], values[idx % n]))
                .collect();
            return PairTable::Integer { values, keys };
        }
        let quotient = mode.quotient_mode();
        let values = set.values();
        let rows = values.par_iter().map(|a| values.iter().map(|b| quotient.apply(a, b)).collect()).collect();
        PairTable::General { rows }
    }

    fn spectrum(&self, mode: EnergyMode) -> Vec<(BigRat, u64)> {
        match self {
            PairTable::Integer { keys, .. } => {
                let small = |(n, d): (i64, u64), count: usize| (BigRat::from_key(&ValueKey::Small(n, d)), count as u64);
                if mode == EnergyMode::Additive {
                    let mut sorted: Vec<i64> = keys.iter().map(|k| k.0).collect();
                    sorted.par_sort_unstable();
                    return sorted.chunk_by(|x, y| x == y).map(|run| small((run[0], 1), run.len())).collect();
                }
                let mut sorted = keys.clone();
                sorted.par_sort_unstable_by(by_value);
                sorted.chunk_by(|x, y| x == y).map(|run| small(run[0], run.len())).collect()
            }
            PairTable::General { rows } => {
                let mut acc = EdgeStatsAccumulator::new(mode.quotient_mode());
                for v in rows.iter().flatten() {
                    acc.push_value(v.clone());
                }
                acc.finish_frequencies()
            }
        }
    }

    fn relation(&self, t_values: &[(BigRat, u64)]) -> Vec<(u32, u32)> {
        let mut relation = Vec::new();
        match self {
            PairTable::Integer { values, keys } => {
                let n = values.len();
                let mut t_keys: Vec<(i64, u64)> = t_values.iter().filter_map(|(t, _)| t.as_small()).collect();
                t_keys.sort_unstable_by(by_value);
                for (idx, k) in keys.iter().enumerate() {
                    if t_keys.binary_search_by(|t| by_value(t, k)).is_ok() {
                        relation.push(((idx / n) as u32, (idx % n) as u32));
                    }
                }
            }
            PairTable::General { rows } => {
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        if t_values.binary_search_by(|(t, _)| t.cmp(v)).is_ok() {
                            relation.push((i as u32, j as u32));
                        }
                    }
                }
            }
        }
        relation
    }
}

/// Value order of reduced fractions with positive denominators below `2⁶²`.
fn by_value(x: &(i64, u64), y: &(i64, u64)) -> std::cmp::Ordering {
    (x.0 as i128 * y.1 as i128).cmp(&(y.0 as i128 * x.1 as i128))
}

fn integer_quotient(mode: EnergyMode, a: i64, b: i64) -> (i64, u64) {
    match mode {
        EnergyMode::Additive => (a - b, 1),
        EnergyMode::Multiplicative => {
            let g = a.gcd(&b);
            let (p, q) = (a / g, b / g);
            if q < 0 {
                (-p, q.unsigned_abs())
            } else {
                (p, q as u64)
            }
        }
    }
}

fn integer_sumset_size(values: &[i64], mode: EnergyMode) -> u64 {
    fn distinct<T: Ord + Send>(mut v: Vec<T>) -> u64 {
        v.par_sort_unstable();
        v.dedup();
        v.len() as u64
    }
    let pairs = || values.iter().enumerate().flat_map(|(i, &a)| values[i..].iter().map(move |&b| (a, b)));
    match mode {
        // |a| < 2⁶² keeps sums in i64
        EnergyMode::Additive => distinct(pairs().map(|(a, b)| a + b).collect()),
        EnergyMode::Multiplicative => distinct(pairs().map(|(a, b)| a as i128 * b as i128).collect()),
    }
}

pub fn dyadic_extract(set: &ValueSet, mode: EnergyMode) -> Result<DyadicExtraction> {
    check_mode(set, mode)?;
    if set.is_empty() {
        return Err(Error::Empty("value set"));
    }
    let table = PairTable::new(set, mode);
    let spectrum = MultiplicitySpectrum { mode, entries: table.spectrum(mode) };
    let n = set.len() as u64;
    let log_levels = level_of(n) + 1;
    let mut level_sums = vec![0u128; log_levels as usize];
    for &(_, m) in &spectrum.entries {
        level_sums[level_of(m) as usize] += m as u128 * m as u128;
    }
    // first maximum wins, so ties go to the smaller level
    let (level, level_sum) = level_sums
        .iter()
        .enumerate()
        .fold((0usize, 0u128), |best, (k, &s)| if s > best.1 { (k, s) } else { best });
    let level = level as u32;
    let t_values: Vec<(BigRat, u64)> =
        spectrum.entries.iter().filter(|(_, m)| level_of(*m) == level).cloned().collect();
    let relation = table.relation(&t_values);
    let ordered_pair_count: u64 = t_values.iter().map(|(_, m)| m).sum();
    debug_assert_eq!(ordered_pair_count, relation.len() as u64);
    let unordered_edge_count = EdgeGraph::from_ordered_pairs(set.len(), relation.clone())?.edge_count() as u64;
    let sumset_size = match &table {
        PairTable::Integer { values, .. } => integer_sumset_size(values, mode),
        PairTable::General { .. } => pairwise_stats(set, mode.sumset_mode())?.distinct_count,
    };
    Ok(DyadicExtraction {
        mode,
        n,
        sumset_size,
        k_ratio: BigRat::from(sumset_size) / BigRat::from(n),
        energy: spectrum.energy(),
        level_sums,
        level,
        level_sum,
        m: t_values.len() as u64,
        t_values,
        relation,
        ordered_pair_count,
        unordered_edge_count,
        log_levels,
    })
}

impl DyadicExtraction {
    /// Every inequality with `K = s/n` cleared from denominators:
    /// `E·s ≥ n⁴`, `S·L ≥ E`, `c²·4·s·L ≥ M·n⁴`, `n² ≤ M·s·L`, `M ≤ 4·s·L`,
    /// and `4·M·m(t)² ≥ S` for `t ∈ T`.
    pub fn checks(&self, spectrum_symmetric: bool) -> ExtractionChecks {
        let big = |x: u128| BigUint::from(x);
        let n = big(self.n as u128);
        let s = big(self.sumset_size as u128);
        let l = big(self.log_levels as u128);
        let m = big(self.m as u128);
        let e = big(self.energy);
        let lvl = big(self.level_sum);
        let cnt = big(self.ordered_pair_count as u128);
        let n4 = n.pow(4);
        ExtractionChecks {
            energy_lower: &e * &s >= n4,
            pigeonhole: &lvl * &l >= e,
            edge_lower: &cnt * &cnt * 4u32 * &s * &l >= &m * &n4,
            m_lower: &n * &n <= &m * &s * &l,
            m_upper: m <= BigUint::from(4u32) * &s * &l,
            per_element: self.t_values.iter().all(|(_, mt)| {
                let mt = big(*mt as u128);
                BigUint::from(4u32) * &m * &mt * &mt >= lvl
            }),
            symmetric: spectrum_symmetric,
        }
    }
}

/// Extraction together with its invariant report.
pub fn dyadic_extract_checked(set: &ValueSet, mode: EnergyMode) -> Result<(DyadicExtraction, ExtractionChecks)> {
    let ext = dyadic_extract(set, mode)?;
    let symmetric = MultiplicitySpectrum::new(set, mode)?.is_symmetric();
    let checks = ext.checks(symmetric);
    Ok((ext, checks))
}

/// Keep the edges whose `mode` values all lie among the `top` most frequent
/// edge values; ties go to the smaller value.
pub fn prune_by_popularity(set: &ValueSet, graph: &EdgeGraph, mode: Mode, top: u64) -> Result<EdgeGraph> {
    let mut freqs = edge_value_frequencies(set, graph, mode)?;
    if top as usize >= freqs.len() {
        return Ok(graph.clone());
    }
    // frequencies arrive sorted by value; a stable sort on count keeps ties in value order
    freqs.sort_by(|a, b| b.1.cmp(&a.1));
    let keep: HashSet<BigRat> = freqs.into_iter().take(top as usize).map(|(v, _)| v).collect();
    let values = set.values();
    Ok(graph.retain_edges(|a, b| {
        let (x, y) = (&values[a as usize], &values[b as usize]);
        keep.contains(&mode.apply(x, y)) && (mode.orientations() == 1 || keep.contains(&mode.apply(y, x)))
    }))
}
