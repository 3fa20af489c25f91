//! Power-law lower bounds `m^a / n^b` on the number of distinct edge values,
//! their crossovers, and the point/line scene behind the incidence bound.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exactnum::BigRat;
use crate::setgraph::{edge_value_frequencies, EdgeGraph, Mode, ValueSet};

/// `m^{m_exponent} / n^{n_exponent}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerTerm {
    pub m_exponent: BigRat,
    pub n_exponent: BigRat,
}

impl PowerTerm {
    pub fn new(m_exponent: BigRat, n_exponent: BigRat) -> Self {
        PowerTerm { m_exponent, n_exponent }
    }

    fn frac(ma: i64, mb: i64, na: i64, nb: i64) -> Self {
        PowerTerm::new(BigRat::frac(ma, mb), BigRat::frac(na, nb))
    }

    pub fn log2_at(&self, n: u64, m: u64) -> f64 {
        self.m_exponent.to_f64() * (m as f64).log2() - self.n_exponent.to_f64() * (n as f64).log2()
    }

    pub fn value_at(&self, n: u64, m: u64) -> f64 {
        self.log2_at(n, m).exp2()
    }

    /// Exact comparison of the two terms at `(n, m)`.
    pub fn cmp_at(&self, other: &PowerTerm, n: u64, m: u64) -> Ordering {
        // self/other = m^da / n^db; clear denominators and compare integers
        let da = &self.m_exponent - &other.m_exponent;
        let db = &self.n_exponent - &other.n_exponent;
        let l = da.denom().lcm(&db.denom());
        let scale = |e: &BigRat| (e.numer() * BigInt::from(&l / e.denom())).to_i64().expect("exponent fits");
        let (a, b) = (scale(&da), scale(&db));
        let pow = |base: u64, e: i64| BigUint::from(base).pow(e.max(0) as u32);
        let left = pow(m, a) * pow(n, -b);
        let right = pow(n, b) * pow(m, -a);
        left.cmp(&right)
    }
}

/// A named bound, the minimum of one or more power terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerBound {
    pub name: String,
    pub terms: Vec<PowerTerm>,
}

impl PowerBound {
    fn single(name: &str, term: PowerTerm) -> Self {
        PowerBound { name: name.to_string(), terms: vec![term] }
    }

    /// `√m`.
    pub fn sqrt_edges() -> Self {
        PowerBound::single("trivial", PowerTerm::frac(1, 2, 0, 1))
    }

    /// `m^{3/2} / n^{7/4}`.
    pub fn incidence() -> Self {
        PowerBound::single("thm41", PowerTerm::frac(3, 2, 7, 4))
    }

    /// `m^{18/11} / n^2`.
    pub fn refined() -> Self {
        PowerBound::single("claim42", PowerTerm::frac(18, 11, 2, 1))
    }

    /// `min(m^{8/14} / n^{1/14}, m / n^{1/2})`.
    pub fn conditional() -> Self {
        PowerBound { name: "bomb".into(), terms: vec![PowerTerm::frac(8, 14, 1, 14), PowerTerm::frac(1, 1, 1, 2)] }
    }

    /// `m^{19/9} / n^{28/9}`.
    pub fn unconditional() -> Self {
        PowerBound::single("uncond", PowerTerm::frac(19, 9, 28, 9))
    }

    pub fn standard() -> Vec<PowerBound> {
        vec![
            PowerBound::sqrt_edges(),
            PowerBound::incidence(),
            PowerBound::refined(),
            PowerBound::conditional(),
            PowerBound::unconditional(),
        ]
    }

    /// `name` or `name:branch` for one of the standard bounds, or an explicit
    /// `a,b` exponent pair.
    pub fn lookup_term(spec: &str) -> Result<PowerTerm> {
        if let Some((a, b)) = spec.split_once(',') {
            return Ok(PowerTerm::new(a.trim().parse()?, b.trim().parse()?));
        }
        let (name, branch) = match spec.split_once(':') {
            Some((name, b)) => (name, Some(b.parse::<usize>().map_err(|_| invalid("bound", format!("bad branch in {spec:?}")))?)),
            None => (spec, None),
        };
        let bound = PowerBound::standard()
            .into_iter()
            .find(|b| b.name == name)
            .ok_or_else(|| invalid("bound", format!("unknown bound {name:?}")))?;
        match (branch, bound.terms.len()) {
            (None, 1) => Ok(bound.terms[0].clone()),
            (None, _) => Err(invalid("bound", format!("{name} is a minimum of several terms; pick one with {name}:0"))),
            (Some(i), len) if i < len => Ok(bound.terms[i].clone()),
            (Some(i), _) => Err(invalid("bound", format!("{name} has no branch {i}"))),
        }
    }

    /// Index of the smallest term at `(n, m)`.
    pub fn active_branch(&self, n: u64, m: u64) -> usize {
        (1..self.terms.len()).fold(0, |best, i| {
            if self.terms[i].cmp_at(&self.terms[best], n, m) == Ordering::Less {
                i
            } else {
                best
            }
        })
    }

    pub fn cmp_at(&self, other: &PowerBound, n: u64, m: u64) -> Ordering {
        self.terms[self.active_branch(n, m)].cmp_at(&other.terms[other.active_branch(n, m)], n, m)
    }

    pub fn value_at(&self, n: u64, m: u64) -> f64 {
        self.terms[self.active_branch(n, m)].value_at(n, m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub log2: f64,
    pub branch: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub m: u64,
    pub values: BTreeMap<String, BoundValue>,
    /// The largest of the bounds.
    pub dominant: String,
    pub note: &'static str,
}

pub const SHAPE_ONLY: &str = "shape only, constants suppressed";

/// All standard bounds at `(n, m)`, `1 ≤ m ≤ n(n−1)/2`.
pub fn evaluate_bounds(n: u64, m: u64) -> Result<BoundsReport> {
    let max_edges = n as u128 * n.saturating_sub(1) as u128 / 2;
    if m == 0 || m as u128 > max_edges {
        return Err(invalid("m", format!("{m} is outside [1, {max_edges}] for n = {n}")));
    }
    let bounds = PowerBound::standard();
    let mut dominant = &bounds[0];
    for b in &bounds[1..] {
        if b.cmp_at(dominant, n, m) == Ordering::Greater {
            dominant = b;
        }
    }
    let values = bounds
        .iter()
        .map(|b| {
            let branch = b.active_branch(n, m);
            let t = &b.terms[branch];
            (b.name.clone(), BoundValue { value: t.value_at(n, m), log2: t.log2_at(n, m), branch })
        })
        .collect();
    Ok(BoundsReport { n, m, values, dominant: dominant.name.clone(), note: SHAPE_ONLY })
}

/// `e` with `b1 = b2` at `m = n^e`.
pub fn crossover_exponent(b1: &PowerTerm, b2: &PowerTerm) -> Result<BigRat> {
    let dm = &b1.m_exponent - &b2.m_exponent;
    if dm.is_zero() {
        return Err(Error::NoCrossover(format!(
            "both terms have m-exponent {}",
            b1.m_exponent
        )));
    }
    Ok((&b1.n_exponent - &b2.n_exponent) / dm)
}

/// Second coordinate of the point grid and the matching line family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// Points `(A+A) × (A·A)` along the graph, lines `y = (x − a)·b`.
    Product,
    /// Points `(A+A) × (A/A)` along the graph, lines `y = (x − a)/b`.
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridLineScene {
    pub grid: GridKind,
    pub points: Vec<(BigRat, BigRat)>,
    /// `(a, b)` parameter pairs.
    pub lines: Vec<(BigRat, BigRat)>,
}

impl GridLineScene {
    pub fn line_y(&self, line: &(BigRat, BigRat), x: &BigRat) -> BigRat {
        let shifted = x - &line.0;
        match self.grid {
            GridKind::Product => shifted * &line.1,
            GridKind::Ratio => shifted / &line.1,
        }
    }

    pub fn is_incident(&self, point: &(BigRat, BigRat), line: &(BigRat, BigRat)) -> bool {
        self.line_y(line, &point.0) == point.1
    }
}

/// The scene for `(A, G)`: sums along the edges against products (or ratios)
/// along the edges, with one line per ordered pair of `A²`.
pub fn elekes_scene(set: &ValueSet, graph: &EdgeGraph, grid: GridKind) -> Result<GridLineScene> {
    if set.contains_zero() {
        return Err(Error::ZeroInSet("line slopes"));
    }
    if graph.is_empty() {
        return Err(Error::Empty("edge set"));
    }
    let values = |mode| -> Result<Vec<BigRat>> {
        Ok(edge_value_frequencies(set, graph, mode)?.into_iter().map(|(v, _)| v).collect())
    };
    let xs = values(Mode::Sum)?;
    let ys = values(match grid {
        GridKind::Product => Mode::Product,
        GridKind::Ratio => Mode::Ratio,
    })?;
    let points = xs.iter().flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let mut seen = HashSet::new();
    let mut lines = Vec::with_capacity(set.len() * set.len());
    for a in set.iter() {
        for b in set.iter() {
            let line = (a.clone(), b.clone());
            if seen.insert(line.clone()) {
                lines.push(line);
            }
        }
    }
    Ok(GridLineScene { grid, points, lines })
}

/// Number of incident (point, line) pairs: each line is evaluated at every
/// point abscissa and the result looked up among the points.
pub fn incidence_count(scene: &GridLineScene) -> u64 {
    let points: HashSet<&(BigRat, BigRat)> = scene.points.iter().collect();
    let mut xs: Vec<&BigRat> = scene.points.iter().map(|(x, _)| x).collect();
    xs.sort();
    xs.dedup();
    scene
        .lines
        .par_iter()
        .map(|line| {
            xs.iter()
                .filter(|&&x| points.contains(&(x.clone(), scene.line_y(line, x))))
                .count() as u64
        })
        .sum()
}

/// `incidences ≥ Σ deg² ≥ 4m²/|A|`, each as an exact integer comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceCheck {
    pub incidences: u64,
    pub degree_square_sum: u128,
    pub covers_degrees: bool,
    pub degrees_cover_average: bool,
}

pub fn check_incidences(set: &ValueSet, graph: &EdgeGraph, grid: GridKind) -> Result<IncidenceCheck> {
    let scene = elekes_scene(set, graph, grid)?;
    let incidences = incidence_count(&scene);
    let dsq = graph.degree_square_sum();
    let m = graph.edge_count() as u128;
    Ok(IncidenceCheck {
        incidences,
        degree_square_sum: dsq,
        covers_degrees: incidences as u128 >= dsq,
        degrees_cover_average: dsq * set.len() as u128 >= 4 * m * m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_incidences(scene: &GridLineScene) -> u64 {
        // y = (x − a)·b  ⇔  y = b·x − a·b, checked with cross-multiplied i128
        let mut count = 0;
        for (x, y) in &scene.points {
            for (a, b) in &scene.lines {
                let (xn, xd) = x.as_small().unwrap();
                let (yn, yd) = y.as_small().unwrap();
                let (an, ad) = a.as_small().unwrap();
                let (bn, bd) = b.as_small().unwrap();
                let (xn, xd, yn, yd, an, ad, bn, bd) =
                    (xn as i128, xd as i128, yn as i128, yd as i128, an as i128, ad as i128, bn as i128, bd as i128);
                // x − a = (xn·ad − an·xd) / (xd·ad)
                let (sn, sd) = (xn * ad - an * xd, xd * ad);
                let hit = match scene.grid {
                    GridKind::Product => yn * sd * bd == sn * bn * yd,
                    GridKind::Ratio => yn * sd * bn == sn * bd * yd,
                };
                count += hit as u64;
            }
        }
        count
    }

    #[test]
    fn crossovers() {
        let t41 = PowerBound::lookup_term("thm41").unwrap();
        let triv = PowerBound::lookup_term("trivial").unwrap();
        let bomb0 = PowerBound::lookup_term("bomb:0").unwrap();
        assert_eq!(crossover_exponent(&t41, &triv).unwrap(), BigRat::frac(7, 4));
        assert_eq!(crossover_exponent(&t41, &bomb0).unwrap(), BigRat::frac(47, 26));
        assert_eq!(crossover_exponent(&bomb0, &t41).unwrap(), BigRat::frac(47, 26));
        assert!(crossover_exponent(&t41, &t41).is_err());
        assert!(PowerBound::lookup_term("bomb").is_err());
        assert!(PowerBound::lookup_term("bomb:2").is_err());
        assert_eq!(PowerBound::lookup_term("3/2, 7/4").unwrap(), t41);
    }

    #[test]
    fn incidence_bound_meets_sqrt_at_seven_quarters() {
        let n = 1u64 << 8;
        let m = 1u64 << 14;
        let t41 = PowerBound::incidence();
        assert_eq!(t41.cmp_at(&PowerBound::sqrt_edges(), n, m), Ordering::Equal);
        assert!((t41.value_at(n, m) - 128.0).abs() < 1e-9);
        let r = evaluate_bounds(1 << 20, (2f64.powf(20.0 * 1.9)) as u64).unwrap();
        let expect = 1.5 * 38.0 - 1.75 * 20.0;
        assert!((r.values["thm41"].log2 - expect).abs() < 1e-6);
        assert_eq!(r.note, SHAPE_ONLY);
    }

    #[test]
    fn range_checks() {
        assert!(evaluate_bounds(10, 0).is_err());
        assert!(evaluate_bounds(10, 46).is_err());
        assert!(evaluate_bounds(10, 45).is_ok());
    }

    #[test]
    fn path_scene() {
        let a = ValueSet::from_integers([1, 2, 3]).unwrap();
        let g = EdgeGraph::from_edges(3, vec![(0, 1), (1, 2)]).unwrap();
        let scene = elekes_scene(&a, &g, GridKind::Product).unwrap();
        let pts: Vec<(BigRat, BigRat)> = [(3, 2), (3, 6), (5, 2), (5, 6)]
            .iter()
            .map(|&(x, y)| (BigRat::from_integer(x), BigRat::from_integer(y)))
            .collect();
        assert_eq!(scene.points, pts);
        assert_eq!(scene.lines.len(), 9);
        let count = incidence_count(&scene);
        assert_eq!(count, brute_incidences(&scene));
        assert!(count >= 6);
        let one = ValueSet::from_integers([1]).unwrap();
        assert!(elekes_scene(&one, &EdgeGraph::empty(1), GridKind::Product).is_err());
        assert!(elekes_scene(&ValueSet::from_integers([0, 1]).unwrap(), &g, GridKind::Product).is_err());
    }

    #[test]
    fn single_point_single_line() {
        let scene = GridLineScene {
            grid: GridKind::Product,
            points: vec![(BigRat::from_integer(3), BigRat::from_integer(4))],
            lines: vec![(BigRat::from_integer(1), BigRat::from_integer(2))],
        };
        assert_eq!(incidence_count(&scene), 1);
    }

    fn small_graph() -> impl Strategy<Value = (ValueSet, EdgeGraph)> {
        prop::collection::btree_set(-9i64..10, 2..7).prop_filter("no zero", |s| !s.contains(&0)).prop_flat_map(|s| {
            let n = s.len() as u32;
            let all: Vec<(u32, u32)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let len = all.len();
            (Just(s), prop::sample::subsequence(all, 1..=len))
        })
        .prop_map(|(s, edges)| {
            let set = ValueSet::from_integers(s).unwrap();
            let g = EdgeGraph::from_edges(set.len(), edges).unwrap();
            (set, g)
        })
    }

    proptest! {
        #[test]
        fn incidence_chain((set, g) in small_graph(), ratio in any::<bool>()) {
            let grid = if ratio { GridKind::Ratio } else { GridKind::Product };
            let check = check_incidences(&set, &g, grid).unwrap();
            let scene = elekes_scene(&set, &g, grid).unwrap();
            prop_assert_eq!(check.incidences, brute_incidences(&scene));
            prop_assert!(check.covers_degrees);
            prop_assert!(check.degrees_cover_average);
        }

        #[test]
        fn incidence_beats_unconditional(n in 2u64..3000, frac in 0.0f64..1.0) {
            let m = 1 + ((n * n - 1) as f64 * frac) as u64;
            prop_assert_ne!(
                PowerBound::incidence().cmp_at(&PowerBound::unconditional(), n, m),
                Ordering::Less
            );
        }

        #[test]
        fn monotone_in_m(n in 2u64..5000, m in 1u64..1000) {
            let m = m.min(n * (n - 1) / 2 - 1).max(1);
            for b in PowerBound::standard() {
                prop_assert!(b.value_at(n, m + 1) >= b.value_at(n, m) * (1.0 - 1e-12));
            }
        }

        #[test]
        fn crossover_ignores_argument_order(a in 1i64..20, b in 1i64..20, c in 0i64..20, d in 1i64..20) {
            let t1 = PowerTerm::frac(a, b, c, d);
            let t2 = PowerBound::lookup_term("thm41").unwrap();
            prop_assume!(t1.m_exponent != t2.m_exponent);
            let e = crossover_exponent(&t1, &t2).unwrap();
            prop_assert_eq!(e.clone(), crossover_exponent(&t2, &t1).unwrap());
            // at m = n^e with e·q integral the two terms agree exactly
            let q = e.denom().to_u32().unwrap();
            let num = e.numer();
            if q <= 4 && num > BigInt::from(0) && num <= BigInt::from(4 * q) {
                let n = 2u64.pow(q);
                let m = 2u64.pow(num.to_u32().unwrap());
                prop_assert_eq!(t1.cmp_at(&t2, n, m), Ordering::Equal);
            }
        }
    }
}
