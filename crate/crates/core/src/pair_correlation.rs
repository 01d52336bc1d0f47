//! Empirical pair correlation of unfolded zeros versus Montgomery's
//! prediction `R2(x) = 1 - (sin(pi x) / (pi x))^2`.

use std::f64::consts::PI;
use std::io::{self, Write};

use thiserror::Error;

use crate::ensemble::{scaled_delta_stream, scaled_deltas_anchored, EnsembleError};
use crate::histogram::{BinningSpec, Histogram, HistogramError};
use crate::par::{chunks, map_ordered, Execution};
use crate::zeros::ZeroWindow;

/// Lower end of the x range used for the rms deviation.
pub const RMS_FROM: f64 = 0.2;

#[derive(Debug, Error)]
pub enum PairCorrelationError {
    #[error("need at least 10 bins, got {0}")]
    Bins(usize),
    #[error("n_max must be at least 1")]
    Lag,
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Histogram(#[from] HistogramError),
}

pub fn r2_theory(x: f64) -> f64 {
    let a = (PI * x).abs();
    if a < 1e-8 {
        // sin(a)/a = 1 - a^2/6 + ..., so R2 ~ a^2/3.
        return a * a / 3.0;
    }
    let s = a.sin() / a;
    1.0 - s * s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelationResult {
    pub histogram: Histogram,
    /// Pair density per zero per unit scaled distance at each bin centre.
    pub normalized_density: Vec<f64>,
    pub theory: Vec<f64>,
    pub rms_deviation: f64,
}

impl PairCorrelationResult {
    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let b = *self.histogram.binning();
        (0..b.bin_count()).map(move |k| b.center(k))
    }

    /// Mean of the empirical density over bins with centres in `[from, to]`.
    pub fn mean_density_between(&self, from: f64, to: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .centers()
            .zip(&self.normalized_density)
            .filter(|(c, _)| *c >= from && *c <= to)
            .map(|(_, d)| *d)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    /// `bin_center,empirical_density,theory_density` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "bin_center,empirical_density,theory_density")?;
        for ((c, d), t) in self.centers().zip(&self.normalized_density).zip(&self.theory) {
            writeln!(out, "{c},{d},{t}")?;
        }
        Ok(())
    }
}

/// Root-mean-square of `density - theory` over bins with centres in `[RMS_FROM, cutoff]`.
pub fn rms_deviation(centers: &[f64], density: &[f64], theory: &[f64], cutoff: f64) -> f64 {
    let (sum, n) = centers
        .iter()
        .zip(density.iter().zip(theory))
        .filter(|(c, _)| **c >= RMS_FROM && **c <= cutoff)
        .fold((0.0, 0usize), |(s, n), (_, (d, t))| (s + (d - t) * (d - t), n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

pub fn estimate(
    window: &ZeroWindow<'_>,
    cutoff: f64,
    bin_count: usize,
    n_max: usize,
) -> Result<PairCorrelationResult, PairCorrelationError> {
    estimate_with(window, cutoff, bin_count, n_max, Execution::default())
}

pub fn estimate_with(
    window: &ZeroWindow<'_>,
    cutoff: f64,
    bin_count: usize,
    n_max: usize,
    exec: Execution,
) -> Result<PairCorrelationResult, PairCorrelationError> {
    if bin_count < 10 {
        return Err(PairCorrelationError::Bins(bin_count));
    }
    if n_max < 1 {
        return Err(PairCorrelationError::Lag);
    }
    // Validates cutoff and the density domain up front.
    scaled_delta_stream(window, n_max, cutoff)?;
    let binning = BinningSpec::new(0.0, cutoff, bin_count)?;

    // Anchor chunks are fixed, so the merged counts do not depend on the
    // number of worker threads.
    let count = window.count();
    let parts = chunks(count);
    let hists = map_ordered(exec, parts.len(), |c| {
        let (start, end) = parts[c];
        let mut h = Histogram::new(binning);
        for v in scaled_deltas_anchored(window, start..end, n_max, cutoff).expect("validated above") {
            h.add(v);
        }
        h
    });
    let mut histogram = Histogram::new(binning);
    for h in &hists {
        histogram.merge(h)?;
    }

    let width = binning.width();
    let norm = count as f64 * width;
    let normalized_density: Vec<f64> = histogram.counts().iter().map(|&c| c as f64 / norm).collect();
    let centers: Vec<f64> = (0..bin_count).map(|k| binning.center(k)).collect();
    let theory: Vec<f64> = centers.iter().map(|&x| r2_theory(x)).collect();
    let rms = rms_deviation(&centers, &normalized_density, &theory, cutoff);
    Ok(PairCorrelationResult {
        histogram,
        normalized_density,
        theory,
        rms_deviation: rms,
    })
}
