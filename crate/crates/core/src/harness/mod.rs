//! Running generators by name, per-construction reports, sweeps over
//! parameter lists, and log-log exponent fits.

mod fit;
mod invariants;
mod report;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_blowup, build_blowup_restricted, build_case1, build_case2, build_matching, build_projection,
    build_ruzsa_digits, build_sumprod, ruzsa_tail, ConstructionKind, ConstructionOutput, SumprodLattice,
};
use crate::error::{invalid, Error, Result};
use crate::exactnum::BigRat;
use crate::setgraph::ValueSet;

pub use fit::{fit_exponent, fit_points, FitResult, Quantity};
pub use invariants::check_invariants;
pub use report::{
    build_report, emit_json, parse_json, read_records_csv, write_records_csv, ConstructionReport, ReportOptions,
    ReportStats,
};

/// Generator inputs. Unused fields are ignored by a given generator.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub n: Option<u64>,
    /// Side length for the projection construction (`n = s²`).
    pub s: Option<u32>,
    pub c: Option<BigRat>,
    pub k: Option<u32>,
    pub delta: Option<BigRat>,
    pub seed: u64,
    /// Base set for the blow-ups; defaults to `{2^0, …, 2^{k−1}}`.
    pub base: Option<ValueSet>,
    pub allow_large: bool,
}

fn need<T: Clone>(v: &Option<T>, name: &'static str) -> Result<T> {
    v.clone().ok_or_else(|| invalid(name, "required for this construction"))
}

impl Params {
    pub fn with_n(n: u64) -> Self {
        Params { n: Some(n), ..Default::default() }
    }

    pub fn with_k(k: u32) -> Self {
        Params { k: Some(k), ..Default::default() }
    }

    pub fn with_s(s: u32) -> Self {
        Params { s: Some(s), ..Default::default() }
    }

    fn projection_n(&self) -> Result<u64> {
        match (self.n, self.s) {
            (Some(n), _) => Ok(n),
            (None, Some(s)) => Ok(s as u64 * s as u64),
            (None, None) => Err(invalid("n", "projection needs n or s")),
        }
    }

    fn base_set(&self) -> Result<ValueSet> {
        if let Some(b) = &self.base {
            return Ok(b.clone());
        }
        let k = need(&self.k, "k")?;
        if !(2..=62).contains(&k) {
            return Err(invalid("k", "geometric base needs 2 ≤ k ≤ 62"));
        }
        ValueSet::from_integers((0..k).map(|i| 1i64 << i))
    }

    /// Sort key for ordering sweep points.
    fn order_key(&self) -> (Option<u64>, Option<u32>, Option<u32>, Option<BigRat>, u64) {
        (self.n, self.s, self.k, self.c.clone(), self.seed)
    }
}

pub fn run_construction(kind: ConstructionKind, p: &Params) -> Result<ConstructionOutput> {
    match kind {
        ConstructionKind::Sumprod => build_sumprod(need(&p.n, "n")?),
        ConstructionKind::Case1 => build_case1(need(&p.n, "n")?, &need(&p.c, "c")?),
        ConstructionKind::Case2 => build_case2(need(&p.n, "n")?, &need(&p.c, "c")?),
        ConstructionKind::Projection => build_projection(p.projection_n()?),
        ConstructionKind::Matching => build_matching(need(&p.k, "k")? as usize),
        ConstructionKind::Ruzsa => {
            let k = need(&p.k, "k")?;
            let mut out = build_ruzsa_digits(k, p.allow_large)?;
            if let Some(delta) = &p.delta {
                if !delta.is_positive() {
                    return Err(invalid("delta", "must be positive"));
                }
                out.params.insert("delta".into(), delta.to_string());
                let tail = ruzsa_tail(k, delta)?;
                out.details.insert("tail".into(), serde_json::json!(tail));
            }
            Ok(out)
        }
        ConstructionKind::Blowup => build_blowup(&p.base_set()?, p.seed),
        ConstructionKind::BlowupRestricted => build_blowup_restricted(&p.base_set()?, p.seed),
    }
}

/// One sweep point, flattened for CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub construction: String,
    pub params: std::collections::BTreeMap<String, String>,
    pub n_set: u64,
    pub m_edges: u64,
    pub sums: Option<u64>,
    pub products: Option<u64>,
    pub ratios: Option<u64>,
    pub differences: Option<u64>,
    pub seconds: Option<f64>,
}

impl SweepRecord {
    pub fn from_report(r: &ConstructionReport) -> Self {
        let d = |s: &Option<crate::setgraph::EdgeValueStats>| s.as_ref().map(|s| s.distinct_count);
        SweepRecord {
            construction: r.name.clone(),
            params: r.params.clone(),
            n_set: r.n_set,
            m_edges: r.m_edges,
            sums: d(&r.stats.sum),
            products: d(&r.stats.product),
            ratios: d(&r.stats.ratio),
            differences: d(&r.stats.difference),
            seconds: r.seconds,
        }
    }
}

/// `|A|` and the edge count of the sumprod construction without building
/// the value set or the edge list.
pub fn sumprod_counts(n: u64) -> Result<(u64, u64)> {
    let lattice = SumprodLattice::for_sumprod(n, true)?;
    Ok((lattice.triple_count() as u64, lattice.edge_count()))
}

/// Run `kind` at every point (sorted by parameters) and report each.
/// With `opts.counts_only`, sumprod points are counted by streaming.
pub fn sweep(kind: ConstructionKind, points: &[Params], opts: &ReportOptions) -> Result<Vec<ConstructionReport>> {
    if points.is_empty() {
        return Err(Error::Empty("sweep parameter list"));
    }
    let mut points = points.to_vec();
    points.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    points
        .iter()
        .map(|p| {
            let start = Instant::now();
            let mut report = if kind == ConstructionKind::Sumprod && opts.counts_only {
                let n = need(&p.n, "n")?;
                let (n_set, m_edges) = sumprod_counts(n)?;
                ConstructionReport::counts(kind, [("n".to_string(), n.to_string())].into(), n_set, m_edges)
            } else {
                let out = run_construction(kind, p).map_err(|e| with_point(e, p))?;
                build_report(&out, opts)?
            };
            if opts.timings {
                report.seconds = Some(start.elapsed().as_secs_f64());
            }
            Ok(report)
        })
        .collect()
}

fn with_point(e: Error, p: &Params) -> Error {
    let describe = format!("n={:?} s={:?} k={:?} c={:?}", p.n, p.s, p.k, p.c.as_ref().map(|c| c.to_string()));
    match e {
        Error::InvalidParameter { name, reason } => Error::InvalidParameter { name, reason: format!("{reason} ({describe})") },
        other => other,
    }
}
