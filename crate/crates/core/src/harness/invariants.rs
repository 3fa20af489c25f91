use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::report::ReportStats;
use crate::constructions::{digit_match_pair_count, Case2Stages, ConstructionKind, ConstructionOutput, Provenance};
use crate::error::{invalid, Result};
use crate::exactnum::{le_scaled_power, BigRat};
use crate::setgraph::{large_over_small_stats, pairwise_stats, Mode, ValueSet};

fn param<T: std::str::FromStr>(out: &ConstructionOutput, key: &'static str) -> Result<T> {
    out.param(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| invalid(key, "missing or malformed in construction params"))
}

struct Checks<'a> {
    map: BTreeMap<String, bool>,
    stats: &'a ReportStats,
}

impl Checks<'_> {
    fn put(&mut self, key: &str, ok: bool) {
        self.map.insert(key.to_string(), ok);
    }

    fn distinct(&self, mode: Mode) -> Option<u64> {
        self.stats.get(mode).map(|s| s.distinct_count)
    }

    /// Record `key` only when the stats for `mode` were computed.
    fn with(&mut self, key: &str, mode: Mode, f: impl FnOnce(&crate::setgraph::EdgeValueStats) -> Result<bool>) -> Result<()> {
        if let Some(s) = self.stats.get(mode) {
            let ok = f(s)?;
            self.put(key, ok);
        }
        Ok(())
    }
}

fn max_le(s: &crate::setgraph::EdgeValueStats, n: u64, exponent: &BigRat) -> Result<bool> {
    match &s.max_abs_value {
        Some(v) => le_scaled_power(v, &BigRat::one(), n, exponent),
        None => Ok(true),
    }
}

fn count_le(count: u64, coef: i64, n: u64, exponent: &BigRat) -> Result<bool> {
    le_scaled_power(&BigRat::from(count), &BigRat::from_integer(coef), n, exponent)
}

/// Exact pass/fail checks of the identities and inequalities each
/// construction is known to satisfy. Checks needing an uncomputed stats mode
/// are omitted.
pub fn check_invariants(out: &ConstructionOutput, stats: &ReportStats) -> Result<BTreeMap<String, bool>> {
    let mut c = Checks { map: BTreeMap::new(), stats };
    let n_set = out.set.len() as u64;
    let m = out.graph.edge_count() as u64;
    c.put("witnesses", out.verify_witnesses().is_ok());
    if let (Some(s), Some(p)) = (c.distinct(Mode::Sum), c.distinct(Mode::Product)) {
        c.put("trivial_bound", (s + p) as u128 * (s + p) as u128 >= m as u128);
    }
    match out.kind {
        ConstructionKind::Sumprod => {
            let n: u64 = param(out, "n")?;
            let e = BigRat::frac(4, 3);
            c.with("products_integer", Mode::Product, |s| Ok(s.all_integer))?;
            c.with("products_le_n^(4/3)", Mode::Product, |s| max_le(s, n, &e))?;
            c.with("sums_le_2n^(4/3)", Mode::Sum, |s| count_le(s.distinct_count, 2, n, &e))?;
        }
        ConstructionKind::Case1 => {
            let n: u64 = param(out, "n")?;
            let cc: BigRat = param(out, "c")?;
            let two_c = &cc * &BigRat::from_integer(2);
            let two_minus_c = &BigRat::from_integer(2) - &cc;
            c.with("products_integer", Mode::Product, |s| Ok(s.all_integer))?;
            c.with("products_le_n^(2c)", Mode::Product, |s| max_le(s, n, &two_c))?;
            c.with("sums_le_2n^(2-c)", Mode::Sum, |s| count_le(s.distinct_count, 2, n, &two_minus_c))?;
        }
        ConstructionKind::Case2 => {
            let st: Case2Stages = out
                .details
                .get("stages")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| invalid("stages", "case2 output lacks its stage record"))?;
            c.put("products_le_threshold", st.output_distinct_products <= st.threshold);
            c.put("sums_le_threshold", st.output_distinct_sums <= st.threshold);
            c.put("edges_shrink", st.output_edges <= st.after_products_edges && st.after_products_edges <= st.input_edges);
            c.with("stage_products_match", Mode::Product, |s| Ok(s.distinct_count == st.output_distinct_products))?;
            c.with("stage_sums_match", Mode::Sum, |s| Ok(s.distinct_count == st.output_distinct_sums))?;
        }
        ConstructionKind::Projection => {
            let n: u64 = param(out, "n")?;
            let s: u64 = param(out, "s")?;
            c.put("set_size", n_set == s * (s - 1));
            c.put("edge_count", m == (s - 1) * s * (2 * s - 1) / 6);
            c.with("sums_closed_form", Mode::Sum, |st| Ok(st.distinct_count == (s - 1) * (s - 2) + 1))?;
            c.with("sums_le_n", Mode::Sum, |st| Ok(st.distinct_count <= n))?;
            c.with("ratios_le_n", Mode::Ratio, |st| Ok(st.distinct_count <= n))?;
        }
        ConstructionKind::Matching => {
            let k: u64 = param(out, "k")?;
            c.put("set_size", n_set == 2 * k * k);
            c.put("perfect_matching", out.graph.is_perfect_matching());
            c.with("sums_eq_k", Mode::Sum, |st| Ok(st.distinct_count == k))?;
            let quotients = large_over_small_stats(&out.set, &out.graph)?;
            c.put("quotients_eq_k", quotients.distinct_count == k);
        }
        ConstructionKind::Ruzsa => ruzsa_checks(&mut c, out)?,
        ConstructionKind::Blowup | ConstructionKind::BlowupRestricted => blowup_checks(&mut c, out)?,
    }
    Ok(c.map)
}

fn ruzsa_checks(c: &mut Checks<'_>, out: &ConstructionOutput) -> Result<()> {
    let k: u32 = param(out, "k")?;
    let pow = |b: u64| b.pow(k);
    c.put("set_size", out.set.len() as u64 == pow(3));
    c.put("sumset_size", pairwise_stats(&out.set, Mode::Sum)?.distinct_count == pow(6));
    let diff = pairwise_stats(&out.set, Mode::Difference)?;
    c.put("difference_set_size", diff.distinct_count == pow(7));
    // 3^r-fold differences: C(k,r)·3^r·6^{k−r} ordered pairs, so that many / 3^r values
    let expected: BTreeMap<u64, u64> = (0..=k)
        .map(|r| {
            let mult = 3u64.pow(r);
            let pairs = digit_match_pair_count(k, r);
            let classes = pairs / BigUint::from(mult);
            (mult, u64::try_from(classes).expect("fits for admissible k"))
        })
        .collect();
    c.put("difference_histogram", diff.histogram == expected);
    Ok(())
}

fn blowup_checks(c: &mut Checks<'_>, out: &ConstructionOutput) -> Result<()> {
    let Provenance::Blowup { witnesses, .. } = &out.provenance else {
        return Err(invalid("provenance", "blow-up output without blow-up witnesses"));
    };
    let base = ValueSet::build(witnesses.iter().map(|w| w.a.clone()).collect())?.set;
    let products = ValueSet::build(witnesses.iter().map(|w| w.d.clone()).collect())?.set;
    let (a, d) = (base.len() as u64, products.len() as u64);
    c.put("set_size", out.set.len() as u64 == 2 * a * d);
    let sumset = pairwise_stats(&base, Mode::Sum)?.distinct_count;
    let m = out.graph.edge_count() as u64;
    if out.kind == ConstructionKind::Blowup {
        c.with("sums_eq_sumset", Mode::Sum, |s| Ok(s.distinct_count == sumset))?;
        c.put("edge_count", m == a * a * a);
        let ratio_set = pairwise_stats(&base, Mode::Ratio)?.distinct_count;
        c.with("ratios_le_2|A||A/A|", Mode::Ratio, |s| Ok(s.distinct_count <= 2 * a * ratio_set))?;
    } else {
        let pairs: u64 = param(out, "ordered_pairs")?;
        let big_m: u64 = param(out, "m")?;
        c.put("edge_count", m == pairs * a);
        c.with("sums_le_sumset", Mode::Sum, |s| Ok(s.distinct_count <= sumset))?;
        c.with("ratios_le_2M|A|", Mode::Ratio, |s| Ok(s.distinct_count <= 2 * big_m * a))?;
    }
    Ok(())
}
