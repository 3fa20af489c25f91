use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SweepRecord;
use crate::error::{invalid, Error, Result};

/// A measured column of a sweep record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    NSet,
    MEdges,
    Sums,
    Products,
    Ratios,
    Differences,
    SumsPlusProducts,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::NSet => "n_set",
            Quantity::MEdges => "m_edges",
            Quantity::Sums => "sums",
            Quantity::Products => "products",
            Quantity::Ratios => "ratios",
            Quantity::Differences => "differences",
            Quantity::SumsPlusProducts => "sums+products",
        }
    }

    pub fn of(self, r: &SweepRecord) -> Option<u64> {
        match self {
            Quantity::NSet => Some(r.n_set),
            Quantity::MEdges => Some(r.m_edges),
            Quantity::Sums => r.sums,
            Quantity::Products => r.products,
            Quantity::Ratios => r.ratios,
            Quantity::Differences => r.differences,
            Quantity::SumsPlusProducts => Some(r.sums? + r.products?),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n_set" | "n" => Quantity::NSet,
            "m_edges" | "m" | "edges" => Quantity::MEdges,
            "sums" => Quantity::Sums,
            "products" => Quantity::Products,
            "ratios" => Quantity::Ratios,
            "differences" => Quantity::Differences,
            "sums+products" => Quantity::SumsPlusProducts,
            _ => return Err(invalid("quantity", format!("unknown quantity {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub x: String,
    pub y: String,
    pub slope: f64,
    pub intercept: f64,
    /// Euclidean norm of the log-space residuals.
    pub residual: f64,
    pub points: usize,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_points(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(invalid("fit", "x and y lengths differ"));
    }
    if xs.len() < 3 {
        return Err(invalid("fit", format!("{} points; at least 3 are needed", xs.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(invalid("fit", "every quantity must be positive"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(invalid("fit", "all x values are equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>().sqrt();
    Ok((slope, intercept, residual))
}

pub fn fit_exponent(records: &[SweepRecord], x: Quantity, y: Quantity) -> Result<FitResult> {
    let mut xs = Vec::with_capacity(records.len());
    let mut ys = Vec::with_capacity(records.len());
    for r in records {
        let missing = |q: Quantity| invalid("fit", format!("record {:?} has no {q}", r.params));
        xs.push(x.of(r).ok_or_else(|| missing(x))? as f64);
        ys.push(y.of(r).ok_or_else(|| missing(y))? as f64);
    }
    let (slope, intercept, residual) = fit_points(&xs, &ys)?;
    Ok(FitResult { x: x.to_string(), y: y.to_string(), slope, intercept, residual, points: xs.len() })
}
