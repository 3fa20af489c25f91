//! Brute-force recomputations at small parameters, each compared with the
//! main code path. Used by `verify` and by tests.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::bounds::{elekes_scene, incidence_count, GridKind};
use crate::constructions::{
    build_blowup, build_case1, build_matching, build_projection, build_ruzsa_digits, build_sumprod,
    digit_match_pair_count, ruzsa_tail, ConstructionKind, ConstructionOutput, Provenance,
};
use crate::energy::{energy, EnergyMode};
use crate::error::{invalid, Result};
use crate::exactnum::BigRat;
use crate::pencils::{verify_four_incidences, PencilScene};
use crate::setgraph::{edge_stats, EdgeGraph, Mode, ValueSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl OracleCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        OracleCheck { name: name.into(), passed, detail: detail.into() }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, expected: T, got: T) -> Self {
        let passed = expected == got;
        let detail = if passed { format!("{got:?}") } else { format!("expected {expected:?}, got {got:?}") };
        OracleCheck::new(name, passed, detail)
    }
}

/// Which part of the library to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Construction(ConstructionKind),
    Energy,
    Bounds,
    Pencils,
    All,
}

impl std::str::FromStr for Target {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "energy" => Target::Energy,
            "bounds" => Target::Bounds,
            "pencils" => Target::Pencils,
            "all" => Target::All,
            other => Target::Construction(other.parse()?),
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Largest `x` with `x^q ≤ n^p`, by counting up.
fn floor_root(n: u64, p: u32, q: u32) -> u64 {
    let target = (n as u128).pow(p);
    let mut x = 0u64;
    while ((x + 1) as u128).checked_pow(q).is_some_and(|v| v <= target) {
        x += 1;
    }
    x
}

fn smallest_factor(u: u64) -> u64 {
    (2..=u).find(|d| u % d == 0).unwrap_or(u64::MAX)
}

type ValuePairs = BTreeSet<(BigRat, BigRat)>;

/// Values `uw/v` and edges `{uw/v, zv/w}` straight from the definition.
fn lattice_oracle(t: u64, ub: u64) -> (BTreeSet<BigRat>, ValuePairs) {
    let us: Vec<u64> = (1..=ub).filter(|&u| u == 1 || smallest_factor(u) > t).collect();
    let mut values = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for v in 1..=t {
        for w in (1..=t).filter(|&w| gcd(v, w) == 1) {
            for &u in &us {
                let a = BigRat::frac((u * w) as i64, v as i64);
                values.insert(a.clone());
                for &z in &us {
                    let b = BigRat::frac((z * v) as i64, w as i64);
                    if a != b {
                        edges.insert((a.clone().min(b.clone()), a.clone().max(b)));
                    }
                }
            }
        }
    }
    (values, edges)
}

fn value_pairs(out: &ConstructionOutput) -> ValuePairs {
    out.graph
        .edges()
        .iter()
        .map(|&(a, b)| (out.set[a as usize].clone(), out.set[b as usize].clone()))
        .collect()
}

fn hash_distinct(set: &ValueSet, g: &EdgeGraph, mode: Mode) -> u64 {
    let mut seen = HashSet::new();
    for &(a, b) in g.edges() {
        let (x, y) = (&set[a as usize], &set[b as usize]);
        seen.insert(mode.apply(x, y));
        if mode.orientations() == 2 {
            seen.insert(mode.apply(y, x));
        }
    }
    seen.len() as u64
}

fn stats_checks(label: &str, out: &ConstructionOutput) -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for mode in Mode::ALL {
        if mode == Mode::Ratio && out.set.contains_zero() {
            continue;
        }
        let got = edge_stats(&out.set, &out.graph, mode)?.distinct_count;
        checks.push(OracleCheck::eq(format!("{label}: distinct {mode}"), hash_distinct(&out.set, &out.graph, mode), got));
    }
    Ok(checks)
}

fn sumprod_checks() -> Result<Vec<OracleCheck>> {
    let n = 4096;
    let out = build_sumprod(n)?;
    let (t, ub) = (floor_root(n, 1, 6), floor_root(n, 2, 3));
    let (values, edges) = lattice_oracle(t, ub);
    let mut checks = vec![
        OracleCheck::eq("sumprod n=4096: values", values.into_iter().collect::<Vec<_>>(), out.set.values().to_vec()),
        OracleCheck::eq("sumprod n=4096: edges", edges, value_pairs(&out)),
    ];
    checks.extend(stats_checks("sumprod n=4096", &out)?);
    Ok(checks)
}

fn case1_checks() -> Result<Vec<OracleCheck>> {
    let n = 256;
    let out = build_case1(n, &BigRat::frac(3, 4))?;
    // (1 − 3/4)/2 = 1/8 and 3/4
    let (t, ub) = (floor_root(n, 1, 8), floor_root(n, 3, 4));
    let (values, edges) = lattice_oracle(t, ub);
    let mut checks = vec![
        OracleCheck::eq("case1 n=256 c=3/4: values", values.into_iter().collect::<Vec<_>>(), out.set.values().to_vec()),
        OracleCheck::eq("case1 n=256 c=3/4: edges", edges, value_pairs(&out)),
    ];
    checks.extend(stats_checks("case1 n=256", &out)?);
    Ok(checks)
}

fn projection_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for s in [3u32, 5, 8] {
        let out = build_projection(s as u64 * s as u64)?;
        let p = |i: u32, j: u32| BigRat::from_integer((1i64 << i) - (1i64 << j));
        let mut values = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for j in 1..=s {
            for i in j + 1..=s {
                values.insert(p(i, j));
                values.insert(-p(i, j));
                for k in j + 1..=s {
                    let (a, b) = (p(i, j), -p(k, j));
                    edges.insert((a.clone().min(b.clone()), a.max(b)));
                }
            }
        }
        checks.push(OracleCheck::eq(format!("projection s={s}: values"), values.into_iter().collect::<Vec<_>>(), out.set.values().to_vec()));
        checks.push(OracleCheck::eq(format!("projection s={s}: edges"), edges, value_pairs(&out)));
        checks.extend(stats_checks(&format!("projection s={s}"), &out)?);
    }
    Ok(checks)
}

fn is_prime_naive(x: u64) -> bool {
    x >= 2 && (2..x).take_while(|d| d * d <= x).all(|d| x % d != 0)
}

fn matching_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for k in [1usize, 2, 5] {
        let out = build_matching(k)?;
        let primes: Vec<u64> = (2..).filter(|&x| is_prime_naive(x)).take(2 * k).collect();
        let mut edges = BTreeSet::new();
        for &p in &primes[..k] {
            for &q in &primes[k..] {
                let small = BigRat::frac(p as i64, q as i64);
                let large = BigRat::frac(((q - 1) * p) as i64, q as i64);
                edges.insert((small.clone().min(large.clone()), small.max(large)));
            }
        }
        checks.push(OracleCheck::eq(format!("matching k={k}: edges"), edges, value_pairs(&out)));
        checks.extend(stats_checks(&format!("matching k={k}"), &out)?);
    }
    Ok(checks)
}

fn ruzsa_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for k in 1..=4u32 {
        let out = build_ruzsa_digits(k, false)?;
        let mut ints: Vec<i64> = vec![0];
        for _ in 0..k {
            ints = ints.iter().flat_map(|&x| [0, 1, 3].map(|d| 10 * x + d)).collect();
        }
        let sums: HashSet<i64> = ints.iter().flat_map(|a| ints.iter().map(move |b| a + b)).collect();
        let diffs: HashSet<i64> = ints.iter().flat_map(|a| ints.iter().map(move |b| a - b)).collect();
        checks.push(OracleCheck::eq(format!("ruzsa k={k}: |A+A|"), 6u64.pow(k), sums.len() as u64));
        checks.push(OracleCheck::eq(format!("ruzsa k={k}: |A-A|"), 7u64.pow(k), diffs.len() as u64));
        checks.push(OracleCheck::eq(format!("ruzsa k={k}: |A|"), ints.len(), out.set.len()));
        checks.push(tail_check(k, &BigRat::frac(1, 6))?);
    }
    Ok(checks)
}

/// Agreeing-digit count over all `9^k` ordered pairs against the closed form.
pub fn tail_check(k: u32, delta: &BigRat) -> Result<OracleCheck> {
    let digits: Vec<Vec<u8>> = (0..3usize.pow(k))
        .map(|mut x| {
            (0..k)
                .map(|_| {
                    let d = (x % 3) as u8;
                    x /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let cutoff = (BigRat::frac(1, 3) + delta) * BigRat::from(k as u64);
    let mut hits = 0u64;
    let mut by_r = vec![0u64; k as usize + 1];
    for a in &digits {
        for b in &digits {
            let r = a.iter().zip(b).filter(|(x, y)| x == y).count();
            by_r[r] += 1;
            if BigRat::from(r as u64) > cutoff {
                hits += 1;
            }
        }
    }
    let closed_by_r: Vec<u64> =
        (0..=k).map(|r| u64::try_from(digit_match_pair_count(k, r)).expect("small k")).collect();
    let brute = BigRat::frac(hits as i64, 9i64.pow(k));
    let tail = ruzsa_tail(k, delta)?;
    let passed = brute == tail && by_r == closed_by_r;
    Ok(OracleCheck::new(
        format!("ruzsa tail k={k} delta={delta}"),
        passed,
        format!("closed form {tail}, enumeration {brute}"),
    ))
}

fn blowup_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for base in [vec![1i64, 2, 4], vec![2, 3, 7, 11], vec![-3, 1, 5]] {
        let a = ValueSet::from_integers(base.iter().copied())?;
        let out = build_blowup(&a, 9)?;
        let Provenance::Blowup { zeta, .. } = &out.provenance else { unreachable!() };
        let mut edges = BTreeSet::new();
        let mut sums = BTreeSet::new();
        for x in a.iter() {
            for y in a.iter() {
                for z in a.iter() {
                    let shift = zeta * &(x * z);
                    let (p, q) = (x + &shift, y - &shift);
                    sums.insert(&p + &q);
                    edges.insert((p.clone().min(q.clone()), p.max(q)));
                }
            }
        }
        let sumset: BTreeSet<BigRat> = a.iter().flat_map(|x| a.iter().map(move |y| x + y)).collect();
        checks.push(OracleCheck::eq(format!("blowup {base:?}: edges"), edges, value_pairs(&out)));
        checks.push(OracleCheck::eq(format!("blowup {base:?}: sums = A+A"), sumset, sums));
        checks.extend(stats_checks(&format!("blowup {base:?}"), &out)?);
    }
    Ok(checks)
}

fn energy_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for xs in [vec![1i64, 2, 3], vec![1, 2, 5, 11], vec![1, 2, 4, 8, 16], vec![-4, -1, 2, 3, 6, 9]] {
        let a = ValueSet::from_integers(xs.iter().copied())?;
        for mode in [EnergyMode::Additive, EnergyMode::Multiplicative] {
            let mut count = 0u128;
            let v = a.values();
            let mut reps: HashMap<BigRat, u128> = HashMap::new();
            for x in v {
                for y in v {
                    let key = match mode {
                        EnergyMode::Additive => x + y,
                        EnergyMode::Multiplicative => x * y,
                    };
                    *reps.entry(key).or_default() += 1;
                }
            }
            for r in reps.values() {
                count += r * r;
            }
            checks.push(OracleCheck::eq(format!("energy {xs:?} {}", mode.name()), count, energy(&a, mode)?));
        }
    }
    Ok(checks)
}

fn bounds_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    let sets = [vec![1i64, 2, 3], vec![1, 2, 3, 5, 8], vec![-2, -1, 1, 3, 4, 6]];
    for xs in sets {
        let a = ValueSet::from_integers(xs.iter().copied())?;
        let n = a.len() as u32;
        let g = EdgeGraph::from_edges(a.len(), (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())?;
        for grid in [GridKind::Product, GridKind::Ratio] {
            let scene = elekes_scene(&a, &g, grid)?;
            let brute = scene
                .points
                .iter()
                .map(|p| scene.lines.iter().filter(|l| scene.is_incident(p, l)).count() as u64)
                .sum::<u64>();
            checks.push(OracleCheck::eq(format!("incidences {xs:?} {grid:?}"), brute, incidence_count(&scene)));
        }
    }
    Ok(checks)
}

fn pencils_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for s in [3u32, 6, 10] {
        let scene = PencilScene::with_side(s)?;
        let report = verify_four_incidences(&scene);
        // each point against every line of each family by linear scan
        let brute_ok = scene.points.iter().all(|(x, y)| {
            let f = &scene.families;
            let c0 = f[0].iter().filter(|c| *c == x).count();
            let c1 = f[1].iter().filter(|c| *c == y).count();
            let c2 = f[2].iter().filter(|c| **c == x + y).count();
            let c3 = f[3].iter().filter(|c| *c * x == *y).count();
            [c0, c1, c2, c3] == [1, 1, 1, 1]
        });
        checks.push(OracleCheck::eq(format!("pencils s={s}: verdict"), brute_ok, report.passed));
        checks.push(OracleCheck::eq(
            format!("pencils s={s}: points"),
            PencilScene::closed_form_point_count(s) as usize,
            report.points,
        ));
    }
    Ok(checks)
}

pub fn run(target: Target) -> Result<Vec<OracleCheck>> {
    use ConstructionKind as K;
    match target {
        Target::Construction(K::Sumprod) | Target::Construction(K::Case2) => sumprod_checks(),
        Target::Construction(K::Case1) => case1_checks(),
        Target::Construction(K::Projection) => projection_checks(),
        Target::Construction(K::Matching) => matching_checks(),
        Target::Construction(K::Ruzsa) => ruzsa_checks(),
        Target::Construction(K::Blowup) | Target::Construction(K::BlowupRestricted) => blowup_checks(),
        Target::Energy => energy_checks(),
        Target::Bounds => bounds_checks(),
        Target::Pencils => pencils_checks(),
        Target::All => {
            let mut all = Vec::new();
            for f in [
                sumprod_checks,
                case1_checks,
                projection_checks,
                matching_checks,
                ruzsa_checks,
                blowup_checks,
                energy_checks,
                bounds_checks,
                pencils_checks,
            ] {
                all.extend(f()?);
            }
            Ok(all)
        }
    }
}

/// Parse a target name, rejecting unknown names.
pub fn parse_target(name: &str) -> Result<Target> {
    name.parse().map_err(|_| invalid("target", format!("unknown verify target {name:?}")))
}
