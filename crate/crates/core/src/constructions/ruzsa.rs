//! Base-10 numbers with digits in `{0, 1, 3}`.
//!
//! `{0,1,3}` has 6 sums and 7 differences, and digit sums (≤ 6) and digit
//! differences (in `[−3, 3]`) never carry, so `|A| = 3^k`, `|A+A| = 6^k`
//! and `|A−A| = 7^k`. A difference whose digit vectors agree in `r` places
//! has multiplicity `3^r`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{params, ConstructionKind, ConstructionOutput, Provenance};
use crate::error::{invalid, Result};
use crate::exactnum::BigRat;
use crate::setgraph::{EdgeGraph, ValueSet};

pub const RUZSA_DIGITS: [u8; 3] = [0, 1, 3];
pub const RUZSA_BASE: u32 = 10;
/// Default guard on `k`; the complete graph has `3^k(3^k − 1)/2` edges.
pub const RUZSA_MAX_K: u32 = 9;

fn digit_vectors(k: u32) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                RUZSA_DIGITS.iter().map(move |&d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

fn from_digits<T: Copy + Into<i64>>(digits: &[T]) -> BigInt {
    digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * RUZSA_BASE + d.into())
}

/// The digit set construction on `k` digits with the complete graph.
/// `k > 9` is refused unless `allow_large` is set.
pub fn build_ruzsa_digits(k: u32, allow_large: bool) -> Result<ConstructionOutput> {
    if k == 0 {
        return Err(invalid("k", "k must be at least 1"));
    }
    if k > RUZSA_MAX_K && !allow_large {
        return Err(invalid("k", format!("k = {k} exceeds the guard {RUZSA_MAX_K}; pass the override to force")));
    }
    let digits = digit_vectors(k);
    let values: Vec<BigRat> = digits.iter().map(|d| BigRat::from_bigint(from_digits(d))).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let set = ValueSet::from_distinct(order.iter().map(|&i| values[i].clone()).collect())?;
    let witnesses = order.iter().map(|&i| digits[i].clone()).collect();
    let n = set.len() as u32;
    let mut edges = Vec::with_capacity(n as usize * (n as usize - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    let graph = EdgeGraph::from_sorted_unchecked(set.len(), edges);
    Ok(ConstructionOutput {
        kind: ConstructionKind::Ruzsa,
        params: params([("k", k.to_string()), ("base", RUZSA_BASE.to_string())]),
        set,
        graph,
        provenance: Provenance::Digits(witnesses),
        details: Default::default(),
    })
}

/// Digits (least significant first) of a non-negative integer with exactly
/// `k` base-10 digits, each in `0..=6`; `None` otherwise.
pub fn decode_sum(value: &BigRat, k: u32) -> Option<Vec<u8>> {
    if !value.is_integer() || value.is_negative() {
        return None;
    }
    let mut v = value.numer();
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let (q, r) = v.div_mod_floor(&BigInt::from(RUZSA_BASE));
        let d = r.to_u8()?;
        if d > 6 {
            return None;
        }
        out.push(d);
        v = q;
    }
    v.is_zero().then_some(out)
}

/// Balanced digits in `[−3, 3]` (least significant first) of an integer
/// with `k` such digits; `None` otherwise.
pub fn decode_difference(value: &BigRat, k: u32) -> Option<Vec<i8>> {
    if !value.is_integer() {
        return None;
    }
    let mut v = value.numer();
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let r = v.mod_floor(&BigInt::from(RUZSA_BASE)).to_i8()?;
        let d = match r {
            0..=3 => r,
            7..=9 => r - RUZSA_BASE as i8,
            _ => return None,
        };
        out.push(d);
        v = (v - d) / RUZSA_BASE;
    }
    v.is_zero().then_some(out)
}

fn binomial(k: u32, r: u32) -> BigUint {
    (0..r).fold(BigUint::one(), |acc, i| acc * (k - i) / (i + 1))
}

/// Ordered pairs `(a, a')` whose digit vectors agree in exactly `r` places:
/// `C(k, r) · 3^r · 6^{k−r}`.
pub fn digit_match_pair_count(k: u32, r: u32) -> BigUint {
    if r > k {
        return BigUint::zero();
    }
    binomial(k, r) * BigUint::from(3u8).pow(r) * BigUint::from(6u8).pow(k - r)
}

/// Exact fraction of the `9^k` ordered pairs whose number of agreeing digits
/// `r` satisfies `r > (1/3 + δ)k`.
pub fn ruzsa_tail(k: u32, delta: &BigRat) -> Result<BigRat> {
    if k == 0 {
        return Err(invalid("k", "k must be at least 1"));
    }
    let cutoff = (BigRat::frac(1, 3) + delta) * BigRat::from(k as u64);
    let mut hits = BigUint::zero();
    for r in 0..=k {
        if BigRat::from(r as u64) > cutoff {
            hits += digit_match_pair_count(k, r);
        }
    }
    BigRat::new(BigInt::from(hits), BigInt::from(BigUint::from(9u8).pow(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setgraph::{pairwise_stats, Mode};

    #[test]
    fn k2_set_and_counts() {
        let out = build_ruzsa_digits(2, false).unwrap();
        let expect: Vec<BigRat> = [0, 1, 3, 10, 11, 13, 30, 31, 33].iter().map(|&v| BigRat::from_integer(v)).collect();
        assert_eq!(out.set.values(), expect.as_slice());
        assert_eq!(out.graph.edge_count(), 36);
        out.verify_witnesses().unwrap();
        assert_eq!(pairwise_stats(&out.set, Mode::Sum).unwrap().distinct_count, 36);
        let diff = pairwise_stats(&out.set, Mode::Difference).unwrap();
        assert_eq!(diff.distinct_count, 49);
        // difference 0 comes from the 9 diagonal pairs
        assert_eq!(diff.histogram.get(&9), Some(&1));
    }

    #[test]
    fn guard_and_override() {
        assert!(build_ruzsa_digits(0, false).is_err());
        assert!(build_ruzsa_digits(10, false).is_err());
        assert!(build_ruzsa_digits(1, true).is_ok());
    }

    #[test]
    fn decoders() {
        let v = BigRat::from_integer(604);
        assert_eq!(decode_sum(&v, 3), Some(vec![4, 0, 6]));
        assert_eq!(decode_sum(&v, 2), None);
        assert_eq!(decode_sum(&BigRat::from_integer(17), 2), None);
        // 3·10 − 2·1 = 28 → digits (−2, 3)
        assert_eq!(decode_difference(&BigRat::from_integer(28), 2), Some(vec![-2, 3]));
        assert_eq!(decode_difference(&BigRat::from_integer(-28), 2), Some(vec![2, -3]));
        assert_eq!(decode_difference(&BigRat::from_integer(5), 2), None);
        assert_eq!(decode_difference(&BigRat::frac(1, 2), 2), None);
    }

    #[test]
    fn sums_and_differences_decode_digitwise() {
        let out = build_ruzsa_digits(3, false).unwrap();
        let Provenance::Digits(d) = &out.provenance else { panic!() };
        for (i, a) in out.set.iter().enumerate() {
            for (j, b) in out.set.iter().enumerate() {
                let s: Vec<u8> = d[i].iter().zip(&d[j]).map(|(x, y)| x + y).collect();
                assert_eq!(decode_sum(&(a + b), 3), Some(s));
                let t: Vec<i8> = d[i].iter().zip(&d[j]).map(|(&x, &y)| x as i8 - y as i8).collect();
                assert_eq!(decode_difference(&(a - b), 3), Some(t));
            }
        }
    }

    #[test]
    fn tail_examples() {
        assert_eq!(ruzsa_tail(2, &BigRat::frac(1, 6)).unwrap(), BigRat::frac(1, 9));
        for k in 1..8 {
            assert!(ruzsa_tail(k, &BigRat::frac(2, 3)).unwrap().is_zero());
            assert!(ruzsa_tail(k, &BigRat::from_integer(5)).unwrap().is_zero());
        }
        let total: BigUint = (0..=6).map(|r| digit_match_pair_count(6, r)).sum();
        assert_eq!(total, BigUint::from(9u32).pow(6));
    }
}
