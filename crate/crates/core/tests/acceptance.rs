//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed. Built with `harness = false`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumgraph::bounds::{crossover_exponent, elekes_scene, incidence_count, GridKind, PowerBound};
use sumgraph::constructions::{
    build_blowup, build_case1, build_matching, build_projection, build_ruzsa_digits, build_sumprod, ruzsa_tail,
    ConstructionKind,
};
use sumgraph::energy::{dyadic_extract, EnergyMode};
use sumgraph::harness::{
    build_report, emit_json, run_construction, sumprod_counts, sweep, Params, ReportOptions,
};
use sumgraph::pencils::{verify_four_incidences, PencilScene};
use sumgraph::setgraph::{edge_stats, large_over_small_stats, pairwise_stats};
use sumgraph::{BigRat, EdgeGraph, Mode, ValueSet};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

struct Suite {
    failed: usize,
    total: usize,
}

impl Suite {
    /// Runs one criterion; `limit` is its runtime budget in seconds.
    fn run(&mut self, id: &str, name: &str, limit: Option<f64>, f: impl FnOnce() -> Check) -> f64 {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if secs >= l => Err(format!("took {secs:.2}s, budget {l}s")),
            (o, _) => o,
        };
        self.report(id, name, secs, outcome);
        secs
    }

    fn report(&mut self, id: &str, name: &str, secs: f64, outcome: Check) {
        self.total += 1;
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                self.failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{id}] {name} ({secs:.2}s): {detail}");
    }

    fn budget(&mut self, id: &str, name: &str, secs: f64, limit: f64) {
        let outcome = if secs < limit { Ok(format!("{secs:.2}s < {limit}s")) } else { Err(format!("{secs:.2}s >= {limit}s")) };
        self.report(id, name, secs, outcome);
    }
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(numerator, denominator)` of an exact value as machine integers.
fn parts(v: &BigRat) -> (i128, i128) {
    (v.numer().to_i128().expect("numerator fits"), v.denom().to_i128().expect("denominator fits"))
}

fn reduce(p: i128, q: i128) -> (i128, i128) {
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    if q < 0 {
        (-p, -q)
    } else {
        (p, q)
    }
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

/// `x ≤ coef · n^(a/b)` for non-negative `x`, as `x^b ≤ coef^b · n^a`.
fn le_power(x: u128, coef: u128, n: u64, a: u32, b: u32) -> bool {
    Pow::pow(big(x), b) <= Pow::pow(big(coef), b) * Pow::pow(BigUint::from(n), a)
}

/// Least-squares slope of `ln y` against `ln x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn in_window(s: f64, lo: f64, hi: f64) -> Check {
    if (lo..=hi).contains(&s) {
        Ok(format!("slope {s:.4} in [{lo}, {hi}]"))
    } else {
        Err(format!("slope {s:.4} outside [{lo}, {hi}]"))
    }
}

// ---- 1: exact identities

fn ruzsa_identities() -> Check {
    for k in 1..=6u32 {
        let out = build_ruzsa_digits(k, false).map_err(e)?;
        let vals: Vec<i128> = out.set.iter().map(|v| parts(v).0).collect();
        let mut sums = HashSet::new();
        let mut diffs: HashMap<i128, u64> = HashMap::new();
        for &a in &vals {
            for &b in &vals {
                sums.insert(a + b);
                *diffs.entry(a - b).or_default() += 1;
            }
        }
        let p = |b: u64| b.pow(k);
        ensure(vals.len() as u64 == p(3), || format!("k={k}: |A| = {}", vals.len()))?;
        ensure(sums.len() as u64 == p(6), || format!("k={k}: |A+A| = {}", sums.len()))?;
        ensure(diffs.len() as u64 == p(7), || format!("k={k}: |A-A| = {}", diffs.len()))?;
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for &m in diffs.values() {
            *hist.entry(m).or_default() += 1;
        }
        for r in 0..=k as u64 {
            let mult = 3u64.pow(r as u32);
            let pairs = binomial(k as u64, r) * mult * 6u64.pow(k - r as u32);
            let got = hist.get(&mult).copied().unwrap_or(0) * mult;
            ensure(got == pairs, || format!("k={k}, r={r}: {got} ordered pairs, expected {pairs}"))?;
        }
        ensure(hist.values().sum::<u64>() == p(7), || format!("k={k}: stray multiplicities {hist:?}"))?;
        let lib = pairwise_stats(&out.set, Mode::Difference).map_err(e)?;
        ensure(lib.histogram == hist, || format!("k={k}: library histogram differs"))?;
        ensure(pairwise_stats(&out.set, Mode::Sum).map_err(e)?.distinct_count == p(6), || format!("k={k}: library sumset"))?;
    }
    Ok("k = 1..6".into())
}

fn matching_identities() -> Check {
    for k in 1..=50usize {
        let out = build_matching(k).map_err(e)?;
        ensure(out.set.len() == 2 * k * k, || format!("k={k}: {} vertices", out.set.len()))?;
        let mut sums = HashSet::new();
        let mut quotients = HashSet::new();
        let mut seen = HashSet::new();
        for &(i, j) in out.graph.edges() {
            ensure(seen.insert(i) && seen.insert(j), || format!("k={k}: not a matching"))?;
            let (a, b) = (&out.set.values()[i as usize], &out.set.values()[j as usize]);
            let ((p1, q1), (p2, q2)) = (parts(a), parts(b));
            sums.insert(reduce(p1 * q2 + p2 * q1, q1 * q2));
            let (big_v, small_v) = if a > b { ((p1, q1), (p2, q2)) } else { ((p2, q2), (p1, q1)) };
            quotients.insert(reduce(big_v.0 * small_v.1, big_v.1 * small_v.0));
        }
        ensure(seen.len() == 2 * k * k, || format!("k={k}: matching misses vertices"))?;
        ensure(sums.len() == k, || format!("k={k}: {} distinct sums", sums.len()))?;
        ensure(quotients.len() == k, || format!("k={k}: {} distinct quotients", quotients.len()))?;
        let lib = large_over_small_stats(&out.set, &out.graph).map_err(e)?;
        ensure(lib.distinct_count == k as u64, || format!("k={k}: library quotients {}", lib.distinct_count))?;
    }
    Ok("k = 1..50".into())
}

fn projection_identities() -> Check {
    for s in 3..=60u64 {
        let n = s * s;
        let out = build_projection(n).map_err(e)?;
        ensure(out.set.len() as u64 == s * (s - 1), || format!("s={s}: |A| = {}", out.set.len()))?;
        let m = out.graph.edge_count() as u64;
        ensure(m == (s - 1) * s * (2 * s - 1) / 6, || format!("s={s}: {m} edges"))?;
        let mut sums = HashSet::new();
        let mut ratios = HashSet::new();
        for &(i, j) in out.graph.edges() {
            let ((p1, q1), (p2, q2)) = (parts(&out.set.values()[i as usize]), parts(&out.set.values()[j as usize]));
            sums.insert(reduce(p1 * q2 + p2 * q1, q1 * q2));
            ratios.insert(reduce(p1 * q2, q1 * p2));
            ratios.insert(reduce(p2 * q1, q2 * p1));
        }
        let sums = sums.len() as u64;
        ensure(sums == (s - 1) * (s - 2) + 1, || format!("s={s}: {sums} sums"))?;
        ensure(sums <= n, || format!("s={s}: sums {sums} > n"))?;
        ensure(ratios.len() as u64 <= n, || format!("s={s}: ratios {} > n", ratios.len()))?;
    }
    Ok("s = 3..60".into())
}

fn crossovers() -> Check {
    let term = |name: &str| PowerBound::lookup_term(name).map_err(e);
    let a = crossover_exponent(&term("thm41")?, &term("trivial")?).map_err(e)?;
    let b = crossover_exponent(&term("thm41")?, &term("bomb:0")?).map_err(e)?;
    // m^a1/n^b1 and m^a2/n^b2 meet at m = n^e with a1·e − b1 = a2·e − b2
    let solve = |a1: (i64, i64), b1: (i64, i64), a2: (i64, i64), b2: (i64, i64)| {
        let fr = |x: (i64, i64)| BigRat::frac(x.0, x.1);
        (fr(b1) - fr(b2)) / (fr(a1) - fr(a2))
    };
    let bomb = PowerBound::lookup_term("bomb:0").map_err(e)?;
    let expect_b = solve((3, 2), (7, 4), parts_pair(&bomb.m_exponent), parts_pair(&bomb.n_exponent));
    ensure(a == BigRat::frac(7, 4), || format!("thm41/trivial crossing {a}"))?;
    ensure(b == BigRat::frac(47, 26), || format!("thm41/bomb crossing {b}"))?;
    ensure(b == expect_b, || format!("thm41/bomb crossing {b} vs hand solve {expect_b}"))?;
    ensure(solve((3, 2), (7, 4), (1, 2), (0, 1)) == a, || "hand solve of thm41/trivial".into())?;
    Ok(format!("{a} and {b}"))
}

fn parts_pair(v: &BigRat) -> (i64, i64) {
    let (p, q) = parts(v);
    (p as i64, q as i64)
}

// ---- 2: inequality suites

struct SumprodRow {
    n: u64,
    n_set: u64,
    sums: u64,
    products: u64,
}

/// `|num / den|` when `den` divides `num`.
fn exact_quotient(num: i128, den: i128) -> Option<u128> {
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        return (n % d == 0).then(|| (n / d).unsigned_abs() as u128);
    }
    (num % den == 0).then(|| (num / den).unsigned_abs())
}

fn sumprod_suite(rows: &mut Vec<SumprodRow>) -> Check {
    for exp in [12u32, 15, 18] {
        let n = 1u64 << exp;
        let out = build_sumprod(n).map_err(e)?;
        let pv: Vec<(i128, i128)> = out.set.iter().map(parts).collect();
        let mut max_product = 0u128;
        for &(i, j) in out.graph.edges() {
            let ((p1, q1), (p2, q2)) = (pv[i as usize], pv[j as usize]);
            let (num, den) = (p1 * p2, q1 * q2);
            let q = exact_quotient(num, den).ok_or_else(|| format!("n=2^{exp}: non-integer product {num}/{den}"))?;
            max_product = max_product.max(q);
        }
        ensure(le_power(max_product, 1, n, 4, 3), || format!("n=2^{exp}: product {max_product} > n^(4/3)"))?;
        let sums = edge_stats(&out.set, &out.graph, Mode::Sum).map_err(e)?.distinct_count;
        let products = edge_stats(&out.set, &out.graph, Mode::Product).map_err(e)?.distinct_count;
        ensure(le_power(sums as u128, 2, n, 4, 3), || format!("n=2^{exp}: {sums} sums > 2n^(4/3)"))?;
        let m = out.graph.edge_count() as u128;
        let sp = (sums + products) as u128;
        ensure(sp * sp >= m, || format!("n=2^{exp}: sqrt(m) > sums+products = {sp}"))?;
        rows.push(SumprodRow { n, n_set: out.set.len() as u64, sums, products });
    }
    Ok(rows.iter().map(|r| format!("2^{}: {}+{}", r.n.trailing_zeros(), r.sums, r.products)).collect::<Vec<_>>().join(", "))
}

fn case1_suite() -> Check {
    let n = 1u64 << 16;
    for (a, b) in [(7i64, 10i64), (3, 4), (4, 5)] {
        let out = build_case1(n, &BigRat::frac(a, b)).map_err(e)?;
        let pv: Vec<(i128, i128)> = out.set.iter().map(parts).collect();
        let mut max_product = 0u128;
        for &(i, j) in out.graph.edges() {
            let ((p1, q1), (p2, q2)) = (pv[i as usize], pv[j as usize]);
            let (num, den) = (p1 * p2, q1 * q2);
            let q = exact_quotient(num, den).ok_or_else(|| format!("c={a}/{b}: non-integer product"))?;
            max_product = max_product.max(q);
        }
        // products ≤ n^{2c}, sums ≤ 2n^{2−c}
        ensure(le_power(max_product, 1, n, 2 * a as u32, b as u32), || format!("c={a}/{b}: product {max_product}"))?;
        let sums = edge_stats(&out.set, &out.graph, Mode::Sum).map_err(e)?.distinct_count;
        ensure(le_power(sums as u128, 2, n, (2 * b - a) as u32, b as u32), || format!("c={a}/{b}: {sums} sums"))?;
        ensure(!out.graph.is_empty(), || format!("c={a}/{b}: no edges"))?;
    }
    Ok("c = 7/10, 3/4, 4/5".into())
}

/// Reduced `a − b` or `a / b` for positive integers.
fn relate(mode: EnergyMode, a: i64, b: i64) -> (i64, i64) {
    match mode {
        EnergyMode::Additive => (a - b, 1),
        EnergyMode::Multiplicative => {
            let g = a.gcd(&b);
            (a / g, b / g)
        }
    }
}

fn energy_instance(vals: &[i64], mode: EnergyMode) -> Result<(), String> {
    let n = vals.len() as u128;
    let mut quotients = Vec::with_capacity(vals.len() * vals.len());
    let mut sumset = Vec::with_capacity(vals.len() * vals.len());
    for (i, &a) in vals.iter().enumerate() {
        for (j, &b) in vals.iter().enumerate() {
            quotients.push(relate(mode, a, b));
            if j >= i {
                sumset.push(match mode {
                    EnergyMode::Additive => a as i128 + b as i128,
                    EnergyMode::Multiplicative => a as i128 * b as i128,
                });
            }
        }
    }
    sumset.sort_unstable();
    sumset.dedup();
    quotients.sort_unstable();
    let spectrum: Vec<((i64, i64), u64)> =
        quotients.chunk_by(|x, y| x == y).map(|run| (run[0], run.len() as u64)).collect();
    let multiplicity = |key: (i64, i64)| spectrum.binary_search_by(|e| e.0.cmp(&key)).ok().map(|i| spectrum[i].1);
    let s = sumset.len() as u128;
    let energy: u128 = spectrum.iter().map(|&(_, m)| m as u128 * m as u128).sum();
    let levels = 64 - (vals.len() as u64).leading_zeros();
    let mut level_sums = vec![0u128; levels as usize];
    for &(_, m) in &spectrum {
        level_sums[(63 - m.leading_zeros()) as usize] += m as u128 * m as u128;
    }
    let l = levels as u128;

    let set = ValueSet::from_integers(vals.iter().copied()).map_err(e)?;
    let ext = dyadic_extract(&set, mode).map_err(e)?;
    let tag = format!("{} n={}", mode.name(), n);
    ensure(ext.energy == energy, || format!("{tag}: energy {} vs oracle {energy}", ext.energy))?;
    ensure(ext.sumset_size as u128 == s, || format!("{tag}: sumset {} vs oracle {s}", ext.sumset_size))?;
    ensure(ext.level_sums == level_sums, || format!("{tag}: level sums differ"))?;
    let best = *level_sums.iter().max().unwrap();
    ensure(ext.level_sum == best, || format!("{tag}: chosen level is not maximal"))?;
    let k = ext.level;
    let t: Vec<u64> = spectrum.iter().map(|e| e.1).filter(|&m| (63 - m.leading_zeros()) == k).collect();
    let big_m = t.len() as u128;
    let cnt: u128 = t.iter().map(|&m| m as u128).sum();
    ensure(ext.m as u128 == big_m, || format!("{tag}: M {} vs oracle {big_m}", ext.m))?;
    ensure(ext.ordered_pair_count as u128 == cnt, || format!("{tag}: pairs {} vs {cnt}", ext.ordered_pair_count))?;
    for (tv, m) in &ext.t_values {
        let (p, q) = parts(tv);
        ensure(multiplicity((p as i64, q as i64)) == Some(*m), || format!("{tag}: m({tv}) mismatch"))?;
    }

    // with K = s/n: E ≥ n³/K; S ≥ E/L; cnt ≥ √(M n³/(4KL)); n/(KL) ≤ M ≤ 4KLn; 4M·m(t)² ≥ S
    let (bn, bs, bl, bm, be, bsk, bc) = (big(n), big(s), big(l), big(big_m), big(energy), big(best), big(cnt));
    let n4 = Pow::pow(bn.clone(), 4u32);
    ensure(&be * &bs >= n4, || format!("{tag}: energy lower bound"))?;
    ensure(&bsk * &bl >= be, || format!("{tag}: pigeonhole"))?;
    ensure(&bc * &bc * 4u32 * &bs * &bl >= &bm * &n4, || format!("{tag}: edge lower bound"))?;
    ensure(&bn * &bn <= &bm * &bs * &bl, || format!("{tag}: M lower bound"))?;
    ensure(bm <= big(4) * &bs * &bl, || format!("{tag}: M upper bound"))?;
    for &m in &t {
        ensure(big(4) * &bm * big(m as u128) * big(m as u128) >= bsk, || format!("{tag}: m(t) = {m} too small"))?;
    }
    Ok(())
}

fn energy_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for i in 0..200 {
        let size = rng.gen_range(8..=512usize);
        // mix of dense ranges, progressions with noise, and sparse random sets
        let range = match i % 4 {
            0 => 2 * size as i64,
            1 => (size * size) as i64,
            2 => 1_000_000,
            _ => 4 * size as i64,
        };
        let mut vals = HashSet::new();
        while vals.len() < size {
            let v = if i % 4 == 3 && rng.gen_bool(0.7) {
                3 * rng.gen_range(1..=size as i64) + 1
            } else {
                rng.gen_range(1..=range)
            };
            vals.insert(v);
        }
        let mut vals: Vec<i64> = vals.into_iter().collect();
        vals.sort_unstable();
        for mode in [EnergyMode::Additive, EnergyMode::Multiplicative] {
            energy_instance(&vals, mode).map_err(|m| format!("set #{i}: {m}"))?;
        }
    }
    Ok("200 sets, both modes, 0 failures".into())
}

/// Incidences by testing every (point, line) pair with cross-multiplication.
fn brute_incidences(vals: &[i64], edges: &[(u32, u32)], grid: GridKind) -> u64 {
    let mut xs = HashSet::new();
    let mut ys = HashSet::new();
    for &(i, j) in edges {
        let (a, b) = (vals[i as usize], vals[j as usize]);
        xs.insert(a + b);
        match grid {
            GridKind::Product => {
                ys.insert((a * b, 1));
            }
            GridKind::Ratio => {
                ys.insert(reduce_i64(a, b));
                ys.insert(reduce_i64(b, a));
            }
        }
    }
    let mut count = 0;
    for &a in vals {
        for &b in vals {
            for &x in &xs {
                for &(p, q) in &ys {
                    // y = (x − a)·b  or  y = (x − a)/b
                    let hit = match grid {
                        GridKind::Product => p == (x - a) * b * q,
                        GridKind::Ratio => p * b == (x - a) * q,
                    };
                    count += hit as u64;
                }
            }
        }
    }
    count
}

fn reduce_i64(p: i64, q: i64) -> (i64, i64) {
    let (p, q) = reduce(p as i128, q as i128);
    (p as i64, q as i64)
}

fn elekes_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut total = 0u64;
    for i in 0..100 {
        let size = rng.gen_range(3..=30usize);
        let mut vals = HashSet::new();
        while vals.len() < size {
            let v: i64 = rng.gen_range(-60..=60);
            if v != 0 {
                vals.insert(v);
            }
        }
        let mut vals: Vec<i64> = vals.into_iter().collect();
        vals.sort_unstable();
        let mut all: Vec<(u32, u32)> = (0..size as u32).flat_map(|a| (a + 1..size as u32).map(move |b| (a, b))).collect();
        all.shuffle(&mut rng);
        let m = rng.gen_range(1..=all.len().min(3 * size));
        all.truncate(m);
        let set = ValueSet::from_integers(vals.iter().copied()).map_err(e)?;
        let graph = EdgeGraph::from_edges(size, all.clone()).map_err(e)?;
        let mut deg = vec![0u64; size];
        for &(a, b) in &all {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let deg2: u64 = deg.iter().map(|d| d * d).sum();
        ensure(deg2 * size as u64 >= 4 * (m * m) as u64, || format!("#{i}: degree-square sum below 4m²/n"))?;
        for grid in [GridKind::Product, GridKind::Ratio] {
            let scene = elekes_scene(&set, &graph, grid).map_err(e)?;
            let got = incidence_count(&scene);
            let brute = brute_incidences(&vals, &all, grid);
            ensure(got == brute, || format!("#{i} {grid:?}: {got} incidences vs brute force {brute}"))?;
            ensure(got >= deg2, || format!("#{i} {grid:?}: {got} < Σdeg² = {deg2}"))?;
            total += got;
        }
    }
    Ok(format!("100 instances, {total} incidences"))
}

fn blowup_suite() -> Check {
    let base = ValueSet::from_integers((0..15).map(|i| 1i64 << i)).map_err(e)?;
    let out = build_blowup(&base, 0).map_err(e)?;
    ensure(out.set.len() == 2 * 15 * 29, || format!("|B| = {}", out.set.len()))?;
    ensure(out.graph.edge_count() == 15 * 15 * 15, || format!("{} edges", out.graph.edge_count()))?;
    let base_sums: HashSet<i64> = (0..15).flat_map(|i| (0..15).map(move |j| (1i64 << i) + (1i64 << j))).collect();
    ensure(base_sums.len() == 120, || format!("|A+A| = {}", base_sums.len()))?;
    let sums = edge_stats(&out.set, &out.graph, Mode::Sum).map_err(e)?;
    ensure(sums.distinct_count == 120, || format!("{} distinct sums", sums.distinct_count))?;
    let mut edge_sums = HashSet::new();
    for &(i, j) in out.graph.edges() {
        edge_sums.insert(&out.set.values()[i as usize] + &out.set.values()[j as usize]);
    }
    let expected: HashSet<BigRat> = base_sums.iter().map(|&v| BigRat::from_integer(v)).collect();
    ensure(edge_sums == expected, || "edge sums are not exactly A+A".into())?;
    let ratios = edge_stats(&out.set, &out.graph, Mode::Ratio).map_err(e)?.distinct_count;
    ensure(ratios <= 2 * 15 * 29, || format!("{ratios} ratios"))?;
    Ok(format!("|B| = 870, 3375 edges, 120 sums, {ratios} ratios"))
}

// ---- 3: exponent trends

fn projection_fit() -> Check {
    let pts: Vec<(f64, f64)> = (10..=60u64)
        .step_by(5)
        .map(|s| {
            let out = build_projection(s * s).unwrap();
            (out.set.len() as f64, out.graph.edge_count() as f64)
        })
        .collect();
    in_window(slope(&pts), 1.45, 1.55)
}

fn sumprod_edge_fit() -> Check {
    let mut pts = Vec::new();
    for exp in [12u32, 15, 18, 21] {
        let (n_set, m) = sumprod_counts(1 << exp).map_err(e)?;
        pts.push((n_set as f64, m as f64));
    }
    in_window(slope(&pts), 1.55, 1.80)
}

fn sumprod_sp_fit(rows: &[SumprodRow]) -> Check {
    ensure(rows.len() == 3, || "needs the three inequality-suite sizes".into())?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n_set as f64, (r.sums + r.products) as f64)).collect();
    in_window(slope(&pts), 1.25, 1.45)
}

fn pencil_fit() -> Check {
    let mut pts = Vec::new();
    for s in (10..=60u32).step_by(5) {
        let scene = PencilScene::with_side(s).map_err(e)?;
        if s <= 30 {
            let report = verify_four_incidences(&scene);
            ensure(report.passed, || format!("s={s}: {} points fail", report.failures.len()))?;
        }
        pts.push(((s * s) as f64, scene.points.len() as f64));
    }
    in_window(slope(&pts), 1.40, 1.60)
}

// ---- 4: tail

fn tail_suite() -> Check {
    let deltas: Vec<(i64, i64)> = (-6..=12).map(|i| (i, 18)).collect();
    for k in 1..=6u32 {
        let out = build_ruzsa_digits(k, false).map_err(e)?;
        let vals: Vec<i128> = out.set.iter().map(|v| parts(v).0).collect();
        // digits agree in place i iff the base-10 digits match
        let digits = |mut v: i128| -> Vec<i128> {
            (0..k)
                .map(|_| {
                    let d = v % 10;
                    v /= 10;
                    d
                })
                .collect()
        };
        let dv: Vec<Vec<i128>> = vals.iter().map(|&v| digits(v)).collect();
        let mut agree = vec![0u64; k as usize + 1];
        for a in &dv {
            for b in &dv {
                agree[a.iter().zip(b).filter(|(x, y)| x == y).count()] += 1;
            }
        }
        let total = 9u64.pow(k);
        ensure(agree.iter().sum::<u64>() == total, || format!("k={k}: pair count"))?;
        let mut prev: Option<BigRat> = None;
        for &(p, q) in &deltas {
            // r > (1/3 + p/q)k  ⇔  3qr > (q + 3p)k
            let hits: u64 = (0..=k as i64)
                .filter(|&r| 3 * q * r > (q + 3 * p) * k as i64)
                .map(|r| agree[r as usize])
                .sum();
            let brute = BigRat::frac(hits as i64, total as i64);
            let got = ruzsa_tail(k, &BigRat::frac(p, q)).map_err(e)?;
            ensure(got == brute, || format!("k={k}, δ={p}/{q}: {got} vs brute force {brute}"))?;
            if let Some(prev) = &prev {
                ensure(&got <= prev, || format!("k={k}: tail rises at δ={p}/{q}"))?;
            }
            prev = Some(got);
        }
        let first = ruzsa_tail(k, &BigRat::frac(-1, 3)).map_err(e)?;
        let last = ruzsa_tail(k, &BigRat::frac(2, 3)).map_err(e)?;
        ensure(first > last, || format!("k={k}: tail is flat"))?;
    }
    Ok(format!("k = 1..6, {} values of δ", deltas.len()))
}

// ---- 5: determinism

fn determinism() -> Check {
    let cases: Vec<(ConstructionKind, Params)> = vec![
        (ConstructionKind::Sumprod, Params::with_n(1 << 12)),
        (ConstructionKind::Case2, Params { c: Some(BigRat::frac(1, 2)), ..Params::with_n(1 << 12) }),
        (ConstructionKind::Ruzsa, Params { delta: Some(BigRat::frac(1, 10)), ..Params::with_k(4) }),
        (ConstructionKind::Blowup, Params { seed: 7, ..Params::with_k(6) }),
        (ConstructionKind::BlowupRestricted, Params { seed: 11, ..Params::with_k(8) }),
        (ConstructionKind::Projection, Params::with_s(20)),
    ];
    let render = |kind: ConstructionKind, p: &Params| -> Result<String, String> {
        let out = run_construction(kind, p).map_err(e)?;
        emit_json(&build_report(&out, &ReportOptions::default()).map_err(e)?).map_err(e)
    };
    for (kind, p) in &cases {
        let (a, b) = (render(*kind, p)?, render(*kind, p)?);
        ensure(a == b, || format!("{kind}: reports differ between runs"))?;
    }
    let points: Vec<Params> = [9u32, 5, 7].iter().map(|&s| Params::with_s(s)).collect();
    let run = || -> Result<String, String> {
        emit_json(&sweep(ConstructionKind::Projection, &points, &ReportOptions::default()).map_err(e)?).map_err(e)
    };
    ensure(run()? == run()?, || "sweep output differs between runs".into())?;
    Ok(format!("{} reports and one sweep byte-identical", cases.len()))
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0, total: 0 };

    suite.run("1a", "ruzsa sizes and difference histogram", Some(1.0), ruzsa_identities);
    suite.run("1b", "matching sums, quotients, vertices", Some(1.0), matching_identities);
    suite.run("1c", "projection closed forms", Some(1.0), projection_identities);
    suite.run("1d", "crossover exponents 7/4 and 47/26", Some(1.0), crossovers);

    let mut rows = Vec::new();
    let mut t2 = 0.0;
    t2 += suite.run("2a", "sumprod products, sums, trivial bound", None, || sumprod_suite(&mut rows));
    t2 += suite.run("2b", "case1 product and sum bounds", None, case1_suite);
    t2 += suite.run("2c", "dyadic extraction inequalities", None, energy_suite);
    t2 += suite.run("2d", "grid incidences", None, elekes_suite);
    t2 += suite.run("2e", "blow-up of a geometric base", None, blowup_suite);
    suite.budget("2", "inequality suites total runtime", t2, 30.0);

    let mut t3 = 0.0;
    t3 += suite.run("3a", "projection edges vs |A|", None, projection_fit);
    t3 += suite.run("3b", "sumprod edges vs |A|", None, sumprod_edge_fit);
    t3 += suite.run("3c", "sumprod sums+products vs |A|", None, || sumprod_sp_fit(&rows));
    t3 += suite.run("3d", "pencil points vs n", None, pencil_fit);
    suite.budget("3", "exponent trends total runtime", t3, 600.0);

    suite.run("4", "tail closed form vs brute force", None, tail_suite);
    suite.run("5", "byte-identical reports", None, determinism);

    println!("{} criteria, {} failed", suite.total, suite.failed);
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
