//! Four-quantile Johnson fit (Slifker and Shapiro, 1980).
//!
//! With quantiles `x(-3s) < x(-s) < x(s) < x(3s)` let
//! `m = x(3s) - x(s)`, `n = x(-s) - x(-3s)` and `p = x(s) - x(-s)`.
//! `mn/p^2 > 1` selects SU, `< 1` selects SB and `= 1` the lognormal SL;
//! each case has closed-form parameters that reproduce all four quantiles.

use statrs::distribution::ContinuousCDF;

use super::{select_family, std_normal, JohnsonError, JohnsonFamily, JohnsonParams};
use crate::histogram::Histogram;
use crate::moments::MomentReport;

pub const DEFAULT_QUANTILE_SPACING: f64 = 0.524;

/// Relative tolerance on `mn/p^2 - 1` (and on `m = n = p`) below which the
/// SL (or normal) closed form is used.
const RATIO_TOLERANCE: f64 = 1e-9;

/// Probability levels `Phi(-3s), Phi(-s), Phi(s), Phi(3s)`.
pub fn quantile_levels(s: f64) -> [f64; 4] {
    let n = std_normal();
    [n.cdf(-3.0 * s), n.cdf(-s), n.cdf(s), n.cdf(3.0 * s)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSet {
    spacing: f64,
    values: [f64; 4],
}

impl QuantileSet {
    pub fn new(values: [f64; 4], spacing: f64) -> Result<Self, JohnsonError> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(JohnsonError::Spacing(spacing));
        }
        if values[0] == values[3] {
            return Err(JohnsonError::Degenerate);
        }
        if !values.windows(2).all(|w| w[0] < w[1]) {
            return Err(JohnsonError::NonIncreasing(values));
        }
        Ok(QuantileSet { spacing, values })
    }

    /// Quantiles of a sorted sample, interpolated linearly between order
    /// statistics at position `(len - 1) * p`.
    pub fn from_sorted(sorted: &[f64], spacing: f64) -> Result<Self, JohnsonError> {
        if sorted.len() < 2 {
            return Err(JohnsonError::Degenerate);
        }
        let levels = quantile_levels(spacing);
        let q = |p: f64| {
            let h = (sorted.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        };
        Self::new(levels.map(q), spacing)
    }

    /// Quantiles read from a histogram by linear interpolation inside bins.
    pub fn from_histogram(histogram: &Histogram, spacing: f64) -> Result<Self, JohnsonError> {
        if histogram.mass() == 0 {
            return Err(JohnsonError::Degenerate);
        }
        let mut values = [0.0; 4];
        for (v, p) in values.iter_mut().zip(quantile_levels(spacing)) {
            *v = histogram.quantile(p).ok_or(JohnsonError::OutOfRange(p))?;
        }
        Self::new(values, spacing)
    }

    pub fn values(&self) -> [f64; 4] {
        self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn levels(&self) -> [f64; 4] {
        quantile_levels(self.spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JohnsonFit {
    pub params: JohnsonParams,
    /// Family implied by the sample's (skewness, kurtosis), when defined.
    pub moment_family: Option<JohnsonFamily>,
}

pub fn fit(summary: &MomentReport, quantiles: &QuantileSet) -> Result<JohnsonFit, JohnsonError> {
    let moment_family = match (summary.skewness, summary.kurtosis) {
        (Some(s), Some(k)) => select_family(s, k).ok(),
        _ => None,
    };
    Ok(JohnsonFit {
        params: fit_quantiles(quantiles)?,
        moment_family,
    })
}

fn fit_quantiles(q: &QuantileSet) -> Result<JohnsonParams, JohnsonError> {
    let [x_m3, x_m1, x_p1, x_p3] = q.values;
    let z = q.spacing;
    let m = x_p3 - x_p1;
    let n = x_m1 - x_m3;
    let p = x_p1 - x_m1;
    let centre = 0.5 * (x_p1 + x_m1);
    let ratio = m * n / (p * p);

    if (m - p).abs() <= RATIO_TOLERANCE * p && (n - p).abs() <= RATIO_TOLERANCE * p {
        return JohnsonParams::normal(centre, p / (2.0 * z));
    }

    if (ratio - 1.0).abs() <= RATIO_TOLERANCE {
        if m <= p {
            return Err(JohnsonError::ReflectedLognormal);
        }
        let mp = m / p;
        let delta = 2.0 * z / mp.ln();
        let gamma = delta * ((mp - 1.0) / (p * mp.sqrt())).ln();
        let xi = centre - 0.5 * p * (mp + 1.0) / (mp - 1.0);
        return JohnsonParams::new(JohnsonFamily::SL, gamma, delta, xi, 1.0);
    }

    if ratio > 1.0 {
        let (mp, np) = (m / p, n / p);
        let delta = 2.0 * z / (0.5 * (mp + np)).acosh();
        let root = (mp * np - 1.0).sqrt();
        let gamma = delta * ((np - mp) / (2.0 * root)).asinh();
        let lambda = 2.0 * p * root / ((mp + np - 2.0) * (mp + np + 2.0).sqrt());
        let xi = centre + p * (np - mp) / (2.0 * (mp + np - 2.0));
        JohnsonParams::new(JohnsonFamily::SU, gamma, delta, xi, lambda)
    } else {
        let (pm, pn) = (p / m, p / n);
        let prod = (1.0 + pm) * (1.0 + pn);
        let denom = pm * pn - 1.0;
        let delta = z / (0.5 * prod.sqrt()).acosh();
        let gamma = delta * ((pn - pm) * (prod - 4.0).sqrt() / (2.0 * denom)).asinh();
        let lambda = p * ((prod - 2.0).powi(2) - 4.0).sqrt() / denom;
        let xi = centre - 0.5 * lambda + p * (pn - pm) / (2.0 * denom);
        JohnsonParams::new(JohnsonFamily::SB, gamma, delta, xi, lambda)
    }
}
