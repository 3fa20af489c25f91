//! Plain-text set and graph files.
//!
//! A value set is one `numerator/denominator` per line. A graph starts with a
//! header line `n m` followed by `m` lines `i j`.

use std::io::{BufRead, Write};

use super::{EdgeGraph, ValueSet};
use crate::error::{Error, Result};
use crate::exactnum::BigRat;

pub fn write_value_set<W: Write>(mut w: W, set: &ValueSet) -> Result<()> {
    for v in set.iter() {
        writeln!(w, "{}", v.to_fraction_string())?;
    }
    Ok(())
}

/// Reads a value set; duplicates are merged silently, blank lines skipped.
pub fn read_value_set<R: BufRead>(r: R) -> Result<ValueSet> {
    let mut values = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: BigRat = t.parse().map_err(|_| Error::Format {
            what: "value set",
            line: i + 1,
            reason: format!("not a rational: {t:?}"),
        })?;
        values.push(v);
    }
    Ok(ValueSet::build(values)?.set)
}

pub fn write_graph<W: Write>(mut w: W, graph: &EdgeGraph) -> Result<()> {
    writeln!(w, "{} {}", graph.vertex_count(), graph.edge_count())?;
    for &(a, b) in graph.edges() {
        writeln!(w, "{a} {b}")?;
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(r: R) -> Result<EdgeGraph> {
    let fmt_err = |line: usize, reason: String| Error::Format { what: "graph", line, reason };
    let mut lines = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (hl, header) = lines.next().ok_or_else(|| fmt_err(1, "missing header".into()))?;
    let header = header?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| fmt_err(hl + 1, format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [n, m] = nums[..] else {
        return Err(fmt_err(hl + 1, format!("header must be \"n m\", got {header:?}")));
    };
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        let mut it = line.split_whitespace().map(|t| t.parse::<u32>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => edges.push((a, b)),
            _ => return Err(fmt_err(i + 1, format!("expected \"i j\", got {line:?}"))),
        }
    }
    if edges.len() != m {
        return Err(fmt_err(hl + 1, format!("header announces {m} edges, found {}", edges.len())));
    }
    EdgeGraph::from_edges(n, edges)
}
