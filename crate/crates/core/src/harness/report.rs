use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::invariants::check_invariants;
use super::SweepRecord;
use crate::bounds::PowerBound;
use crate::constructions::{ConstructionKind, ConstructionOutput};
use crate::error::{Error, Result};
use crate::setgraph::{edge_stats, EdgeValueStats, Mode};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub sum: Option<EdgeValueStats>,
    pub product: Option<EdgeValueStats>,
    pub ratio: Option<EdgeValueStats>,
    pub difference: Option<EdgeValueStats>,
}

impl ReportStats {
    pub fn get(&self, mode: Mode) -> Option<&EdgeValueStats> {
        match mode {
            Mode::Sum => self.sum.as_ref(),
            Mode::Product => self.product.as_ref(),
            Mode::Ratio => self.ratio.as_ref(),
            Mode::Difference => self.difference.as_ref(),
        }
    }

    fn slot(&mut self, mode: Mode) -> &mut Option<EdgeValueStats> {
        match mode {
            Mode::Sum => &mut self.sum,
            Mode::Product => &mut self.product,
            Mode::Ratio => &mut self.ratio,
            Mode::Difference => &mut self.difference,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub n_set: u64,
    pub m_edges: u64,
    pub stats: ReportStats,
    /// Bound values at `(n_set, m_edges)`; `null` for an edgeless graph.
    pub bounds: BTreeMap<String, Option<f64>>,
    pub invariants: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
    pub seconds: Option<f64>,
}

impl ConstructionReport {
    /// A report carrying only the two cardinalities.
    pub fn counts(kind: ConstructionKind, params: BTreeMap<String, String>, n_set: u64, m_edges: u64) -> Self {
        ConstructionReport {
            name: kind.name().to_string(),
            params,
            n_set,
            m_edges,
            stats: ReportStats::default(),
            bounds: bound_values(n_set, m_edges),
            invariants: BTreeMap::new(),
            details: BTreeMap::new(),
            seconds: None,
        }
    }

    pub fn all_invariants_pass(&self) -> bool {
        self.invariants.values().all(|&v| v)
    }

    pub fn failed_invariants(&self) -> Vec<&str> {
        self.invariants.iter().filter(|(_, &v)| !v).map(|(k, _)| k.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub modes: Vec<Mode>,
    /// Record wall-clock seconds; off by default so reports are byte-stable.
    pub timings: bool,
    /// Skip edge statistics (and, for sumprod sweeps, the edge list).
    pub counts_only: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { modes: Mode::ALL.to_vec(), timings: false, counts_only: false }
    }
}

fn bound_values(n: u64, m: u64) -> BTreeMap<String, Option<f64>> {
    PowerBound::standard()
        .into_iter()
        .map(|b| {
            let v = (m > 0 && n >= 2).then(|| b.value_at(n, m));
            (b.name, v)
        })
        .collect()
}

pub fn build_report(out: &ConstructionOutput, opts: &ReportOptions) -> Result<ConstructionReport> {
    let mut stats = ReportStats::default();
    if !opts.counts_only {
        for &mode in &opts.modes {
            if mode == Mode::Ratio && out.set.contains_zero() {
                continue;
            }
            *stats.slot(mode) = Some(edge_stats(&out.set, &out.graph, mode)?);
        }
    }
    let n_set = out.set.len() as u64;
    let m_edges = out.graph.edge_count() as u64;
    let invariants = if opts.counts_only { BTreeMap::new() } else { check_invariants(out, &stats)? };
    Ok(ConstructionReport {
        name: out.kind.name().to_string(),
        params: out.params.clone(),
        n_set,
        m_edges,
        stats,
        bounds: bound_values(n_set, m_edges),
        invariants,
        details: out.details.clone(),
        seconds: None,
    })
}

/// Pretty JSON with a trailing newline.
pub fn emit_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format { what: "json report", line: e.line(), reason: e.to_string() })
}

const COUNT_COLUMNS: [&str; 7] = ["n_set", "m_edges", "sums", "products", "ratios", "differences", "seconds"];

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Format { what: "sweep csv", line, reason: e.to_string() }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// Header `construction, <param keys…>, n_set, m_edges, sums, products,
/// ratios, differences, seconds`; missing values are empty cells.
pub fn write_records_csv<W: Write>(w: W, records: &[SweepRecord]) -> Result<()> {
    let mut keys: Vec<&String> = records.iter().flat_map(|r| r.params.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut out = csv::Writer::from_writer(w);
    let header: Vec<&str> =
        std::iter::once("construction").chain(keys.iter().map(|k| k.as_str())).chain(COUNT_COLUMNS).collect();
    out.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![r.construction.clone()];
        row.extend(keys.iter().map(|k| r.params.get(*k).cloned().unwrap_or_default()));
        row.extend([
            r.n_set.to_string(),
            r.m_edges.to_string(),
            opt(&r.sums),
            opt(&r.products),
            opt(&r.ratios),
            opt(&r.differences),
            opt(&r.seconds),
        ]);
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let width = header.len();
    if width < 1 + COUNT_COLUMNS.len() || header.iter().skip(width - COUNT_COLUMNS.len()).ne(COUNT_COLUMNS) {
        return Err(Error::Format { what: "sweep csv", line: 1, reason: "unexpected header".into() });
    }
    let keys: Vec<String> = header.iter().skip(1).take(width - 1 - COUNT_COLUMNS.len()).map(String::from).collect();
    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = row + 2;
        let bad = |reason: String| Error::Format { what: "sweep csv", line, reason };
        let cell = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<Option<u64>> {
            let c = cell(i);
            if c.is_empty() {
                return Ok(None);
            }
            c.parse().map(Some).map_err(|_| bad(format!("bad count {c:?}")))
        };
        let base = 1 + keys.len();
        let params = keys
            .iter()
            .enumerate()
            .filter(|(i, _)| !cell(1 + i).is_empty())
            .map(|(i, k)| (k.clone(), cell(1 + i).to_string()))
            .collect();
        let seconds = match cell(base + 6) {
            "" => None,
            c => Some(c.parse::<f64>().map_err(|_| bad(format!("bad seconds {c:?}")))?),
        };
        records.push(SweepRecord {
            construction: cell(0).to_string(),
            params,
            n_set: num(base)?.ok_or_else(|| bad("missing n_set".into()))?,
            m_edges: num(base + 1)?.ok_or_else(|| bad("missing m_edges".into()))?,
            sums: num(base + 2)?,
            products: num(base + 3)?,
            ratios: num(base + 4)?,
            differences: num(base + 5)?,
            seconds,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_projection, build_sumprod};

    const SCHEMA: [&str; 8] = ["name", "params", "n_set", "m_edges", "stats", "bounds", "invariants", "seconds"];

    #[test]
    fn sumprod_report_has_schema_fields() {
        let out = build_sumprod(1 << 12).unwrap();
        let r = build_report(&out, &ReportOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&emit_json(&r).unwrap()).unwrap();
        for key in SCHEMA {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["sum", "product", "ratio", "difference"] {
            assert!(v["stats"].get(key).is_some());
        }
        for key in ["trivial", "thm41", "claim42", "bomb", "uncond"] {
            assert!(v["bounds"][key].is_number());
        }
        assert!(v["seconds"].is_null());
        assert!(r.all_invariants_pass(), "{:?}", r.failed_invariants());
    }

    #[test]
    fn json_round_trip() {
        let out = build_projection(100).unwrap();
        let r = build_report(&out, &ReportOptions { timings: true, ..Default::default() }).unwrap();
        let mut r = r;
        r.seconds = Some(0.123456789012345);
        let text = emit_json(&r).unwrap();
        let back: ConstructionReport = parse_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(emit_json(&back).unwrap(), text);
    }

    #[test]
    fn csv_round_trip() {
        let records: Vec<SweepRecord> = [9u64, 25, 49]
            .iter()
            .map(|&n| {
                let r = build_report(&build_projection(n).unwrap(), &ReportOptions::default()).unwrap();
                SweepRecord::from_report(&r)
            })
            .collect();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("construction,n,s,n_set,m_edges,sums,products,ratios,differences,seconds\n"));
        assert_eq!(read_records_csv(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn csv_rejects_bad_header() {
        assert!(read_records_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
