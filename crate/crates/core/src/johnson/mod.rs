//! Johnson distribution system.
//!
//! A Johnson variable `x` maps to a standard normal `z` through
//! `z = gamma + delta * ln f(u)` with `u = (x - xi) / lambda`, where
//!
//! | family | `f(u)`             | support                    |
//! |--------|--------------------|----------------------------|
//! | SL     | `u`                | `x > xi`                   |
//! | SU     | `u + sqrt(1+u^2)`  | all reals                  |
//! | SB     | `u / (1 - u)`      | `xi < x < xi + lambda`     |
//!
//! The normal distribution is kept as its own family with `z = gamma + delta * u`.

mod fit;
mod gof;

pub use fit::{fit, quantile_levels, JohnsonFit, QuantileSet, DEFAULT_QUANTILE_SPACING};
pub use gof::{goodness_of_fit, GofReport, MIN_GOF_MASS};

use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Tolerance used by [`select_family`] for the SL curve and the normal point.
pub const FAMILY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error, PartialEq)]
pub enum JohnsonError {
    #[error("invalid parameters: delta={delta}, lambda={lambda} (both must be positive and finite)")]
    InvalidParams { delta: f64, lambda: f64 },
    #[error("infeasible moments: kurtosis {kurtosis} must exceed 1 + skewness^2 = {bound}")]
    Infeasible { kurtosis: f64, bound: f64 },
    #[error("quantiles must be strictly increasing: {0:?}")]
    NonIncreasing([f64; 4]),
    #[error("quantiles have zero spread")]
    Degenerate,
    #[error("quantile at level {0} lies in the histogram's under- or overflow")]
    OutOfRange(f64),
    #[error("quantile spacing must be positive, got {0}")]
    Spacing(f64),
    #[error("quantiles describe a left-bounded lognormal, which the SL family here cannot represent")]
    ReflectedLognormal,
    #[error("histogram mass {mass} below the minimum {min}")]
    InsufficientMass { mass: u64, min: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum JohnsonFamily {
    SL,
    SU,
    SB,
    #[serde(rename = "NORMAL")]
    Normal,
}

impl fmt::Display for JohnsonFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JohnsonFamily::SL => "SL",
            JohnsonFamily::SU => "SU",
            JohnsonFamily::SB => "SB",
            JohnsonFamily::Normal => "NORMAL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JohnsonParams {
    family: JohnsonFamily,
    gamma: f64,
    delta: f64,
    xi: f64,
    lambda: f64,
}

pub(crate) fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

impl JohnsonParams {
    pub fn new(family: JohnsonFamily, gamma: f64, delta: f64, xi: f64, lambda: f64) -> Result<Self, JohnsonError> {
        let ok = gamma.is_finite() && xi.is_finite() && delta > 0.0 && lambda > 0.0 && delta.is_finite() && lambda.is_finite();
        if !ok {
            return Err(JohnsonError::InvalidParams { delta, lambda });
        }
        Ok(JohnsonParams {
            family,
            gamma,
            delta,
            xi,
            lambda,
        })
    }

    /// Normal distribution with the given mean and standard deviation.
    pub fn normal(mean: f64, sd: f64) -> Result<Self, JohnsonError> {
        Self::new(JohnsonFamily::Normal, 0.0, 1.0, mean, sd)
    }

    pub fn family(&self) -> JohnsonFamily {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `(lo, hi)` bounds of the support; infinite where unbounded.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            JohnsonFamily::SL => (self.xi, f64::INFINITY),
            JohnsonFamily::SB => (self.xi, self.xi + self.lambda),
            JohnsonFamily::SU | JohnsonFamily::Normal => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `ln f(u)` and `d ln f / du`, or `None` outside the open support.
    fn transform(&self, u: f64) -> Option<(f64, f64)> {
        match self.family {
            JohnsonFamily::SL => (u > 0.0).then(|| (u.ln(), 1.0 / u)),
            JohnsonFamily::SU => Some((u.asinh(), 1.0 / u.hypot(1.0))),
            JohnsonFamily::SB => (u > 0.0 && u < 1.0).then(|| (u.ln() - (-u).ln_1p(), 1.0 / (u * (1.0 - u)))),
            JohnsonFamily::Normal => Some((u, 1.0)),
        }
    }

    /// Normal score `z` of `x`, or `None` outside the open support.
    pub fn z(&self, x: f64) -> Option<f64> {
        let u = (x - self.xi) / self.lambda;
        self.transform(u).map(|(g, _)| self.gamma + self.delta * g)
    }

    /// Inverse of [`z`](Self::z).
    pub fn x_of_z(&self, z: f64) -> f64 {
        let w = (z - self.gamma) / self.delta;
        let u = match self.family {
            JohnsonFamily::SL => w.exp(),
            JohnsonFamily::SU => w.sinh(),
            JohnsonFamily::SB => 1.0 / (1.0 + (-w).exp()),
            JohnsonFamily::Normal => w,
        };
        self.xi + self.lambda * u
    }
}

pub fn pdf(params: &JohnsonParams, x: f64) -> f64 {
    let u = (x - params.xi) / params.lambda;
    match params.transform(u) {
        Some((g, slope)) => {
            let z = params.gamma + params.delta * g;
            params.delta / (params.lambda * (2.0 * PI).sqrt()) * slope * (-0.5 * z * z).exp()
        }
        None => 0.0,
    }
}

pub fn cdf(params: &JohnsonParams, x: f64) -> f64 {
    let (lo, hi) = params.support();
    if x <= lo {
        return 0.0;
    }
    if x >= hi {
        return 1.0;
    }
    match params.z(x) {
        Some(z) => std_normal().cdf(z),
        None => 0.0,
    }
}

/// `count` draws, deterministic for a given seed. SB draws that round onto
/// a support boundary are moved to the nearest interior float.
pub fn sample(params: &JohnsonParams, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = params.support();
    (0..count)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let x = params.x_of_z(z);
            if x <= lo {
                lo.next_up()
            } else if x >= hi {
                hi.next_down()
            } else {
                x
            }
        })
        .collect()
}

/// Kurtosis on the lognormal (SL) curve at squared skewness `beta1`.
///
/// The curve is parametrized by `w = exp(1/delta^2)`:
/// `beta1 = (w-1)(w+2)^2`, `beta2 = w^4 + 2w^3 + 3w^2 - 3`.
pub fn sl_boundary_kurtosis(beta1: f64) -> f64 {
    let beta1 = beta1.max(0.0);
    let curve = |w: f64| (w - 1.0) * (w + 2.0) * (w + 2.0);
    let mut lo = 1.0;
    // (w-1)^3 <= curve(w), so this bracket contains the root.
    let mut hi = 2.0 + beta1.cbrt();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if curve(mid) < beta1 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let w = 0.5 * (lo + hi);
    w.powi(4) + 2.0 * w.powi(3) + 3.0 * w * w - 3.0
}

/// Family from the moment pair: above the SL curve is SU, below is SB.
pub fn select_family(skewness: f64, kurtosis: f64) -> Result<JohnsonFamily, JohnsonError> {
    let beta1 = skewness * skewness;
    let bound = 1.0 + beta1;
    if !(kurtosis > bound) {
        return Err(JohnsonError::Infeasible { kurtosis, bound });
    }
    if beta1 <= FAMILY_TOLERANCE && (kurtosis - 3.0).abs() <= FAMILY_TOLERANCE {
        return Ok(JohnsonFamily::Normal);
    }
    let boundary = sl_boundary_kurtosis(beta1);
    Ok(if (kurtosis - boundary).abs() <= FAMILY_TOLERANCE {
        JohnsonFamily::SL
    } else if kurtosis > boundary {
        JohnsonFamily::SU
    } else {
        JohnsonFamily::SB
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su() -> JohnsonParams {
        JohnsonParams::new(JohnsonFamily::SU, 0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn su_peak() {
        assert!((pdf(&su(), 0.0) - 0.398942280401).abs() < 1e-12);
    }

    #[test]
    fn support_edges() {
        let sb = JohnsonParams::new(JohnsonFamily::SB, 0.3, 1.2, 2.0, 5.0).unwrap();
        assert_eq!(pdf(&sb, 2.0), 0.0);
        assert_eq!(pdf(&sb, 7.0), 0.0);
        assert_eq!(pdf(&sb, -1.0), 0.0);
        assert_eq!(cdf(&sb, 2.0), 0.0);
        assert_eq!(cdf(&sb, 8.0), 1.0);
        let sl = JohnsonParams::new(JohnsonFamily::SL, 0.3, 1.2, 2.0, 1.0).unwrap();
        assert_eq!(pdf(&sl, 1.5), 0.0);
        assert_eq!(cdf(&sl, 2.0), 0.0);
    }

    #[test]
    fn sb_median() {
        // z = 0 where ln(u/(1-u)) = -gamma/delta.
        let sb = JohnsonParams::new(JohnsonFamily::SB, 0.5, 2.0, 1.0, 4.0).unwrap();
        let u = 1.0 / (1.0 + (0.25f64).exp());
        assert!((cdf(&sb, 1.0 + 4.0 * u) - 0.5).abs() < 1e-14);
        let mid = JohnsonParams::new(JohnsonFamily::SB, 0.0, 2.0, 1.0, 4.0).unwrap();
        assert!((cdf(&mid, 3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn su_limits() {
        assert_eq!(cdf(&su(), -1e300), 0.0);
        assert_eq!(cdf(&su(), 1e300), 1.0);
    }

    #[test]
    fn invalid_params() {
        assert!(JohnsonParams::new(JohnsonFamily::SU, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(JohnsonParams::new(JohnsonFamily::SU, 0.0, 1.0, 0.0, -1.0).is_err());
        assert!(JohnsonParams::new(JohnsonFamily::SU, f64::NAN, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn sampling_is_seeded_and_in_support() {
        let sb = JohnsonParams::new(JohnsonFamily::SB, 0.0, 0.05, 1.0, 2.0).unwrap();
        let a = sample(&sb, 10_000, 7);
        assert_eq!(a, sample(&sb, 10_000, 7));
        assert_ne!(a, sample(&sb, 10_000, 8));
        assert!(a.iter().all(|&x| x > 1.0 && x < 3.0));
    }

    #[test]
    fn boundary_points() {
        assert!((sl_boundary_kurtosis(0.0) - 3.0).abs() < 1e-12);
        assert!((sl_boundary_kurtosis(2.048) - 6.8496).abs() < 1e-9);
        let k1 = sl_boundary_kurtosis(1e-6);
        let k2 = sl_boundary_kurtosis(2e-6);
        assert!(k1 > 3.0 && k2 > k1);
    }

    #[test]
    fn family_regions() {
        assert_eq!(select_family(0.0, 3.0), Ok(JohnsonFamily::Normal));
        assert_eq!(select_family(0.0, 4.0), Ok(JohnsonFamily::SU));
        assert_eq!(select_family(0.0, 2.5), Ok(JohnsonFamily::SB));
        assert_eq!(select_family(2.048f64.sqrt(), 6.8496), Ok(JohnsonFamily::SL));
        assert_eq!(select_family(-(2.048f64.sqrt()), 6.8496), Ok(JohnsonFamily::SL));
        assert!(matches!(select_family(1.0, 1.9), Err(JohnsonError::Infeasible { .. })));
    }
}
