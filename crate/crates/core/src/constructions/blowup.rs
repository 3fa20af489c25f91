//! Blow-up of a set `A` into `B = {a ± ζd : a ∈ A, d ∈ A·A}` with edges
//! `(a + ζac, b − ζac)`, whose endpoint sum is always `a + b`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{index_distinct, params, ConstructionKind, ConstructionOutput, Provenance};
use crate::energy::{dyadic_extract, EnergyMode};
use crate::error::{invalid, Error, Result};
use crate::exactnum::{next_prime, BigRat};
use crate::setgraph::{pairwise_frequencies, pairwise_stats, EdgeGraph, Mode, ValueSet};

pub const ZETA_RETRY_BUDGET: u32 = 64;

/// Vertex `a + ζd` (or `a − ζd` when `negative`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupWitness {
    pub a: BigRat,
    pub d: BigRat,
    pub negative: bool,
}

impl BlowupWitness {
    pub fn value(&self, zeta: &BigRat) -> BigRat {
        let shift = zeta * &self.d;
        if self.negative {
            &self.a - &shift
        } else {
            &self.a + &shift
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaBeta {
    pub n: u64,
    pub sumset: u64,
    pub productset: u64,
    pub alpha: f64,
    pub beta: f64,
}

/// `α = 2 − log|A+A|/log|A|`, `β = 2 − log|A·A|/log|A|`.
pub fn compute_alpha_beta(set: &ValueSet) -> Result<AlphaBeta> {
    if set.len() < 2 {
        return Err(invalid("A", "need at least two elements"));
    }
    let n = set.len() as u64;
    let sumset = pairwise_stats(set, Mode::Sum)?.distinct_count;
    let productset = pairwise_stats(set, Mode::Product)?.distinct_count;
    let ln = (n as f64).ln();
    Ok(AlphaBeta {
        n,
        sumset,
        productset,
        alpha: 2.0 - (sumset as f64).ln() / ln,
        beta: 2.0 - (productset as f64).ln() / ln,
    })
}

/// Shapes of the restricted blow-up estimates at the measured `N = |B|` and
/// `M`, with all constants and logarithmic factors dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RestrictedTargets {
    pub big_n: f64,
    pub m: f64,
    /// `N^{1/(3−β)}`: size of the base set in terms of `N`.
    pub base_size: f64,
    /// `|A|·M`: ratios per orientation.
    pub ratio_target: f64,
    /// `|A+A|`: sums along the edges.
    pub sum_target: f64,
    /// `√(M·|A|³/K)·|A|`: edges implied by the ordered-pair count.
    pub edge_target: f64,
}

fn draw_zeta(rng: &mut ChaCha8Rng) -> BigRat {
    let num: u64 = rng.gen_range(1..=1u64 << 40);
    let den = next_prime(rng.gen_range(1u64 << 30..=1u64 << 31));
    BigRat::new(BigInt::from(num), BigInt::from(den)).expect("prime denominator")
}

struct Blown {
    zeta: BigRat,
    attempts: u32,
    set: ValueSet,
    witnesses: Vec<BlowupWitness>,
    // set index of (a_idx, d_idx, negative) at (a_idx * |D| + d_idx) * 2 + negative
    position: Vec<u32>,
    products: Vec<BigRat>,
}

fn blow_up(base: &ValueSet, seed: u64) -> Result<Blown> {
    if base.contains_zero() {
        return Err(Error::ZeroInSet("blow-up base"));
    }
    if base.len() < 2 {
        return Err(invalid("A", "need at least two elements"));
    }
    let products: Vec<BigRat> = pairwise_frequencies(base, Mode::Product)?.into_iter().map(|(v, _)| v).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for attempt in 1..=ZETA_RETRY_BUDGET {
        let zeta = draw_zeta(&mut rng);
        let mut items = Vec::with_capacity(2 * base.len() * products.len());
        for a in base.iter() {
            for d in &products {
                for negative in [false, true] {
                    let w = BlowupWitness { a: a.clone(), d: d.clone(), negative };
                    items.push((w.value(&zeta), w));
                }
            }
        }
        match index_distinct(items) {
            Ok((set, witnesses, position)) => {
                return Ok(Blown { zeta, attempts: attempt, set, witnesses, position, products });
            }
            Err(Error::Collision(msg)) => last = format!("ζ = {zeta}: {msg}"),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryBudget { attempts: ZETA_RETRY_BUDGET, constraint: last })
}

/// Blow-up with one edge per `((a, b), c)` for `(a, b)` in `relation`
/// (ordered pairs of indices into `base`) and `c ∈ A`.
pub fn build_blowup_with_relation(
    base: &ValueSet,
    seed: u64,
    relation: &[(u32, u32)],
) -> Result<ConstructionOutput> {
    let blown = blow_up(base, seed)?;
    let dlen = blown.products.len();
    let product_index: HashMap<&BigRat, usize> = blown.products.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let slot = |a: usize, d: usize, negative: bool| blown.position[(a * dlen + d) * 2 + negative as usize];
    let values = base.values();
    let mut edges = Vec::with_capacity(relation.len() * base.len());
    for &(ia, ib) in relation {
        let (ia, ib) = (ia as usize, ib as usize);
        if ia >= base.len() || ib >= base.len() {
            return Err(Error::IndexOutOfRange { index: ia.max(ib), vertex_count: base.len() });
        }
        for c in values {
            let d = product_index[&(&values[ia] * c)];
            edges.push((slot(ia, d, false), slot(ib, d, true)));
        }
    }
    let graph = EdgeGraph::from_edges(blown.set.len(), edges)?;
    let mut details = std::collections::BTreeMap::new();
    details.insert("zeta_attempts".to_string(), serde_json::json!(blown.attempts));
    Ok(ConstructionOutput {
        kind: ConstructionKind::Blowup,
        params: params([
            ("seed", seed.to_string()),
            ("base_size", base.len().to_string()),
            ("product_set_size", dlen.to_string()),
            ("zeta", blown.zeta.to_string()),
        ]),
        set: blown.set,
        graph,
        provenance: Provenance::Blowup { zeta: blown.zeta, witnesses: blown.witnesses },
        details,
    })
}

/// Full blow-up: `|A|³` edges.
pub fn build_blowup(base: &ValueSet, seed: u64) -> Result<ConstructionOutput> {
    let n = base.len() as u32;
    let relation: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    build_blowup_with_relation(base, seed, &relation)
}

/// Blow-up restricted to the ordered pairs whose ratio lies in the heaviest
/// dyadic level of the ratio spectrum of `A`.
pub fn build_blowup_restricted(base: &ValueSet, seed: u64) -> Result<ConstructionOutput> {
    if base.contains_zero() {
        return Err(Error::ZeroInSet("blow-up base"));
    }
    let ext = dyadic_extract(base, EnergyMode::Multiplicative)?;
    let ab = compute_alpha_beta(base)?;
    let mut out = build_blowup_with_relation(base, seed, &ext.relation)?;
    out.kind = ConstructionKind::BlowupRestricted;
    let n = base.len() as f64;
    let m = ext.m as f64;
    let k = ext.k_ratio.to_f64();
    let big_n = out.set.len() as f64;
    let targets = RestrictedTargets {
        big_n,
        m,
        base_size: big_n.powf(1.0 / (3.0 - ab.beta)),
        ratio_target: n * m,
        sum_target: ab.sumset as f64,
        edge_target: (m * n.powi(3) / k).sqrt() * n,
    };
    out.params.insert("m".into(), ext.m.to_string());
    out.params.insert("level".into(), ext.level.to_string());
    out.params.insert("ordered_pairs".into(), ext.ordered_pair_count.to_string());
    out.details.insert("alpha_beta".into(), serde_json::to_value(ab).expect("plain struct"));
    out.details.insert("targets".into(), serde_json::to_value(targets).expect("plain struct"));
    Ok(out)
}
