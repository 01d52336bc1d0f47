//! One-pass, mergeable central moments up to order four.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("non-finite sample value {0}")]
    NonFinite(f64),
}

/// Count, mean and centered power sums `m_k = sum (x - mean)^k` for k = 2..4.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentSummary {
    count: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl MomentSummary {
    pub const fn new() -> Self {
        MomentSummary {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            m3: 0.0,
            m4: 0.0,
        }
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self, MomentError> {
        let mut s = Self::new();
        for &x in xs {
            s.accumulate(x)?;
        }
        Ok(s)
    }

    pub fn accumulate(&mut self, x: f64) -> Result<(), MomentError> {
        if !x.is_finite() {
            return Err(MomentError::NonFinite(x));
        }
        self.push(x);
        Ok(())
    }

    /// Unchecked single-value update (Terriberry's form of the
    /// Welford recurrence).
    #[inline]
    pub(crate) fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    /// Combines two disjoint samples.
    pub fn merge(&self, other: &Self) -> Self {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let d4 = d2 * d2;
        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d3 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        MomentSummary {
            count: self.count + other.count,
            mean,
            m2: m2.max(0.0),
            m3,
            m4: m4.max(0.0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn m3(&self) -> f64 {
        self.m3
    }

    pub fn m4(&self) -> f64 {
        self.m4
    }

    pub fn report(&self) -> MomentReport {
        report(self)
    }
}

impl Extend<f64> for MomentSummary {
    /// Non-finite values are skipped.
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            let _ = self.accumulate(x);
        }
    }
}

/// Population statistics derived from a [`MomentSummary`]. `None` marks a
/// statistic that is undefined for the sample (too few values or zero
/// spread).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub count: u64,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub skewness: Option<f64>,
    /// Full kurtosis, 3 for a normal distribution.
    pub kurtosis: Option<f64>,
}

impl MomentReport {
    pub fn excess_kurtosis(&self) -> Option<f64> {
        self.kurtosis.map(|k| k - 3.0)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance.map(f64::sqrt)
    }
}

pub fn report(s: &MomentSummary) -> MomentReport {
    let n = s.count as f64;
    let mean = (s.count >= 1).then_some(s.mean);
    let variance = (s.count >= 2).then(|| s.m2 / n);
    let shape_defined = s.count >= 3 && s.m2 > 0.0;
    let var = s.m2 / n;
    let skewness = shape_defined.then(|| (s.m3 / n) / var.powf(1.5));
    let kurtosis = shape_defined.then(|| (s.m4 / n) / (var * var));
    MomentReport {
        count: s.count,
        mean,
        variance,
        skewness,
        kurtosis,
    }
}
