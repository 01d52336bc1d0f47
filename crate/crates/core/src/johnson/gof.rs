//! Binned goodness of fit: pooled chi-square and a Kolmogorov-Smirnov
//! distance evaluated at bin edges.

use serde::Serialize;

use super::{cdf, JohnsonError, JohnsonParams};
use crate::histogram::Histogram;

pub const MIN_GOF_MASS: u64 = 100;

/// Cells are pooled until each expects at least this many counts.
const MIN_EXPECTED: f64 = 5.0;

/// Parameters estimated by a Johnson fit, subtracted from the degrees of freedom.
const FITTED_PARAMS: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofReport {
    pub chi_square: f64,
    /// May be zero or negative when too few cells survive pooling.
    pub dof: i64,
    pub ks_statistic: f64,
    pub n_effective: u64,
}

/// Compares `histogram` (including its under- and overflow cells) with
/// `params`.
pub fn goodness_of_fit(params: &JohnsonParams, histogram: &Histogram) -> Result<GofReport, JohnsonError> {
    let mass = histogram.mass();
    if mass < MIN_GOF_MASS {
        return Err(JohnsonError::InsufficientMass {
            mass,
            min: MIN_GOF_MASS,
        });
    }
    let total = mass as f64;
    let binning = histogram.binning();
    let bins = binning.bin_count();
    let edge_cdf: Vec<f64> = (0..=bins).map(|k| cdf(params, binning.edge(k))).collect();

    // Cells: underflow, each bin, overflow.
    let mut cells = Vec::with_capacity(bins + 2);
    cells.push((histogram.underflow() as f64, total * edge_cdf[0]));
    for (k, &c) in histogram.counts().iter().enumerate() {
        cells.push((c as f64, total * (edge_cdf[k + 1] - edge_cdf[k])));
    }
    cells.push((histogram.overflow() as f64, total * (1.0 - edge_cdf[bins])));

    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (obs, exp) in cells {
        acc.0 += obs;
        acc.1 += exp;
        if acc.1 >= MIN_EXPECTED {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => pooled.push(acc),
        }
    }
    let chi_square = pooled
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = pooled.len() as i64 - 1 - FITTED_PARAMS;

    let ks_statistic = (0..=bins)
        .map(|k| (histogram.cdf_at_edge(k) - edge_cdf[k]).abs())
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0);

    Ok(GofReport {
        chi_square,
        dof,
        ks_statistic,
        n_effective: mass,
    })
}
