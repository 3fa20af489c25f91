//! Four pencils of lines (verticals, horizontals, slope −1, and lines through
//! the origin) with many points lying on one line of each.

use std::io::Write;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exactnum::{isqrt, BigRat};

/// Points `(2^i − 2^j, −(2^k − 2^j))` for `1 ≤ j < i, k ≤ s` and the four
/// families, each stored as its sorted, deduplicated line parameter:
/// `x = c`, `y = c`, `x + y = c`, `y = c·x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilScene {
    pub s: u32,
    pub points: Vec<(BigRat, BigRat)>,
    pub families: [Vec<BigRat>; 4],
}

pub const FAMILY_NAMES: [&str; 4] = ["vertical", "horizontal", "antidiagonal", "origin"];

fn pow2_diff(hi: u32, lo: u32) -> BigRat {
    BigRat::from_bigint((BigInt::from(1u8) << hi) - (BigInt::from(1u8) << lo))
}

fn sorted_dedup(mut v: Vec<BigRat>) -> Vec<BigRat> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Slope of the origin line through the point indexed by `(i, j, k)`.
fn origin_slope(i: u32, j: u32, k: u32) -> BigRat {
    -(pow2_diff(k - j, 0) / pow2_diff(i - j, 0))
}

impl PencilScene {
    /// Scene for `s = ⌊√n⌋ ≥ 3`.
    pub fn new(n: u64) -> Result<Self> {
        PencilScene::with_side(isqrt(n) as u32)
    }

    pub fn with_side(s: u32) -> Result<Self> {
        if s < 3 {
            return Err(invalid("n", format!("⌊√n⌋ = {s} is below 3")));
        }
        let mut points = Vec::new();
        let mut xs = Vec::new();
        let mut sums = Vec::new();
        let mut slopes = Vec::new();
        for j in 1..=s {
            for i in j + 1..=s {
                xs.push(pow2_diff(i, j));
                for k in j + 1..=s {
                    let x = pow2_diff(i, j);
                    let y = -pow2_diff(k, j);
                    sums.push(&x + &y);
                    slopes.push(origin_slope(i, j, k));
                    points.push((x, y));
                }
            }
        }
        let xs = sorted_dedup(xs);
        let ys = sorted_dedup(xs.iter().map(|x| -x).collect());
        Ok(PencilScene { s, points, families: [xs, ys, sorted_dedup(sums), sorted_dedup(slopes)] })
    }

    pub fn closed_form_point_count(s: u32) -> u64 {
        let s = s as u64;
        (s - 1) * s * (2 * s - 1) / 6
    }

    pub fn family_sizes(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|f| self.families[f].len())
    }

    /// Number of lines of family `f` through `point`.
    pub fn hits(&self, f: usize, point: &(BigRat, BigRat)) -> usize {
        let (x, y) = point;
        let member = |v: &BigRat| self.families[f].binary_search(v).is_ok() as usize;
        match f {
            0 => member(x),
            1 => member(y),
            2 => member(&(x + y)),
            _ if x.is_zero() && y.is_zero() => self.families[3].len(),
            // the vertical through the origin is not a slope line
            _ if x.is_zero() => 0,
            _ => member(&(y / x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointFailure {
    pub index: usize,
    pub x: String,
    pub y: String,
    pub family: &'static str,
    pub hits: usize,
}

/// Centers as projective points `[x : y : z]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterConfiguration {
    pub centers: [[i64; 3]; 4],
    /// Some three of the centers are collinear.
    pub three_collinear: bool,
    pub all_collinear: bool,
}

const CENTERS: [[i64; 3]; 4] = [[0, 1, 0], [1, 0, 0], [1, -1, 0], [0, 0, 1]];

fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn center_configuration() -> CenterConfiguration {
    let c = CENTERS;
    let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
    let collinear: Vec<bool> = triples.iter().map(|&(a, b, d)| det3(c[a], c[b], c[d]) == 0).collect();
    CenterConfiguration {
        centers: c,
        three_collinear: collinear.iter().any(|&x| x),
        all_collinear: collinear.iter().all(|&x| x),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilReport {
    pub s: u32,
    pub points: usize,
    pub family_sizes: [usize; 4],
    pub passed: bool,
    pub failures: Vec<PointFailure>,
    pub centers: CenterConfiguration,
}

/// Check that every point lies on exactly one line of each family.
pub fn verify_four_incidences(scene: &PencilScene) -> PencilReport {
    let failures: Vec<PointFailure> = scene
        .points
        .par_iter()
        .enumerate()
        .flat_map_iter(|(index, p)| {
            (0..4).filter_map(move |f| {
                let hits = scene.hits(f, p);
                (hits != 1).then(|| PointFailure {
                    index,
                    x: p.0.to_string(),
                    y: p.1.to_string(),
                    family: FAMILY_NAMES[f],
                    hits,
                })
            })
        })
        .collect();
    PencilReport {
        s: scene.s,
        points: scene.points.len(),
        family_sizes: scene.family_sizes(),
        passed: failures.is_empty(),
        failures,
        centers: center_configuration(),
    }
}

/// CSV rows `kind,a,b`: `point,x,y` and one `<family>,c,` per line.
pub fn write_scene_csv<W: Write>(w: W, scene: &PencilScene) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(["kind", "a", "b"]).map_err(io)?;
    for (x, y) in &scene.points {
        out.write_record(["point", &x.to_string(), &y.to_string()]).map_err(io)?;
    }
    for (f, family) in scene.families.iter().enumerate() {
        for c in family {
            out.write_record([FAMILY_NAMES[f], &c.to_string(), ""]).map_err(io)?;
        }
    }
    out.flush()?;
    Ok(())
}
