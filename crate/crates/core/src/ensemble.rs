//! Per-lag distributions of zero differences `delta(n) = gamma(i+n) - gamma(i)`.

use std::io::{self, Write};

use thiserror::Error;

use crate::histogram::{BinningSpec, Histogram, HistogramError};
use crate::moments::{MomentReport, MomentSummary};
use crate::par::{chunks, map_ordered, Execution};
use crate::zeros::{mean_density, ZeroError, ZeroWindow};

/// Default histogram bin width in ordinate units.
pub const DEFAULT_BIN_WIDTH: f64 = 0.05;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("lag {lag} needs a window of more than {lag} zeros, got {count}")]
    Lag { lag: usize, count: usize },
    #[error("lag range {from}..={to} invalid for an ensemble with n_max {n_max}")]
    Range { from: usize, to: usize, n_max: usize },
    #[error("cutoff must be positive, got {0}")]
    Cutoff(f64),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Histogram(#[from] HistogramError),
}

fn check_lag(window: &ZeroWindow<'_>, lag: usize) -> Result<(), EnsembleError> {
    if lag == 0 || lag >= window.count() {
        return Err(EnsembleError::Lag {
            lag,
            count: window.count(),
        });
    }
    Ok(())
}

/// Differences at lag `n` in index order; `count - n` values.
pub fn delta_stream<'a>(
    window: &ZeroWindow<'a>,
    n: usize,
) -> Result<impl ExactSizeIterator<Item = f64> + 'a, EnsembleError> {
    check_lag(window, n)?;
    let o = window.offsets();
    Ok(o[n..].iter().zip(o).map(|(hi, lo)| hi - lo))
}

/// Default binning: `DEFAULT_BIN_WIDTH` bins from 0 to `(n_max + 5)` mean gaps.
pub fn default_binning(window: &ZeroWindow<'_>, n_max: usize) -> Result<BinningSpec, EnsembleError> {
    let hi = (n_max + 5) as f64 * window.mean_gap();
    Ok(BinningSpec::with_width(0.0, hi, DEFAULT_BIN_WIDTH)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowInfo {
    pub start_index: usize,
    pub count: usize,
    pub start_ordinal: Option<u64>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagRecord {
    pub lag: usize,
    pub summary: MomentSummary,
    pub histogram: Histogram,
}

impl LagRecord {
    pub fn report(&self) -> MomentReport {
        self.summary.report()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEnsemble {
    window: WindowInfo,
    binning: BinningSpec,
    lags: Vec<LagRecord>,
}

pub fn build_ensemble(
    window: &ZeroWindow<'_>,
    n_max: usize,
    binning: BinningSpec,
) -> Result<DeltaEnsemble, EnsembleError> {
    build_ensemble_with(window, n_max, binning, Execution::default())
}

/// Lags run independently; within a lag the index range is cut into fixed
/// chunks whose summaries are merged left to right.
pub fn build_ensemble_with(
    window: &ZeroWindow<'_>,
    n_max: usize,
    binning: BinningSpec,
    exec: Execution,
) -> Result<DeltaEnsemble, EnsembleError> {
    check_lag(window, n_max)?;
    let offsets = window.offsets();
    let lags = map_ordered(exec, n_max, |k| {
        let lag = k + 1;
        let mut summary = MomentSummary::new();
        let mut histogram = Histogram::new(binning);
        for (start, end) in chunks(offsets.len() - lag) {
            let mut part = MomentSummary::new();
            for (hi, lo) in offsets[start + lag..end + lag].iter().zip(&offsets[start..end]) {
                let d = hi - lo;
                part.push(d);
                histogram.add(d);
            }
            summary = summary.merge(&part);
        }
        LagRecord {
            lag,
            summary,
            histogram,
        }
    });
    Ok(DeltaEnsemble {
        window: WindowInfo {
            start_index: window.start_index(),
            count: window.count(),
            start_ordinal: window.start_ordinal(),
            source: window.table().source().to_string(),
        },
        binning,
        lags,
    })
}

impl DeltaEnsemble {
    pub fn window(&self) -> &WindowInfo {
        &self.window
    }

    pub fn binning(&self) -> &BinningSpec {
        &self.binning
    }

    pub fn n_max(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[LagRecord] {
        &self.lags
    }

    /// Record for lag `n` (1-based).
    pub fn lag(&self, n: usize) -> Option<&LagRecord> {
        n.checked_sub(1).and_then(|k| self.lags.get(k))
    }

    /// Bin-wise sum of the lag histograms for `n_from..=n_to`.
    pub fn superpose(&self, n_from: usize, n_to: usize) -> Result<Histogram, EnsembleError> {
        if n_from < 1 || n_from > n_to || n_to > self.n_max() {
            return Err(EnsembleError::Range {
                from: n_from,
                to: n_to,
                n_max: self.n_max(),
            });
        }
        let mut total = Histogram::new(self.binning);
        for rec in &self.lags[n_from - 1..n_to] {
            total.merge(&rec.histogram)?;
        }
        Ok(total)
    }

    /// `n,count,mean,variance,skewness,kurtosis,excess_kurtosis`; undefined
    /// statistics are written as `NA`.
    pub fn write_moments_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "n,count,mean,variance,skewness,kurtosis,excess_kurtosis")?;
        for rec in &self.lags {
            let r = rec.report();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                rec.lag,
                r.count,
                na(r.mean),
                na(r.variance),
                na(r.skewness),
                na(r.kurtosis),
                na(r.excess_kurtosis())
            )?;
        }
        Ok(())
    }

    /// `n,bin_lo,bin_hi,count` for every lag and bin.
    pub fn write_histograms_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "n,bin_lo,bin_hi,count")?;
        for rec in &self.lags {
            rec.histogram.write_rows(out, &format!("{},", rec.lag))?;
        }
        Ok(())
    }
}

pub(crate) fn na(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Unit-mean-spacing differences `(gamma(i+n) - gamma(i)) * density(gamma(i))`
/// for `n = 1..=n_max`, keeping those `<= cutoff`. Ordered by `i`, then `n`.
pub fn scaled_delta_stream<'a>(
    window: &ZeroWindow<'a>,
    n_max: usize,
    cutoff: f64,
) -> Result<ScaledDeltas<'a>, EnsembleError> {
    if !(cutoff > 0.0) {
        return Err(EnsembleError::Cutoff(cutoff));
    }
    scaled_deltas_anchored(window, 0..window.count(), n_max, cutoff)
}

/// Scaled differences for left zeros (anchors) in `anchors` only; partners
/// may lie anywhere to the right inside the window.
pub(crate) fn scaled_deltas_anchored<'a>(
    window: &ZeroWindow<'a>,
    anchors: std::ops::Range<usize>,
    n_max: usize,
    cutoff: f64,
) -> Result<ScaledDeltas<'a>, EnsembleError> {
    if !(cutoff > 0.0) {
        return Err(EnsembleError::Cutoff(cutoff));
    }
    // Zeros increase, so the first ordinate bounds the density domain.
    mean_density(window.ordinate(0))?;
    let end = anchors.end.min(window.count());
    let density = if anchors.start < end {
        mean_density(window.ordinate(anchors.start))?
    } else {
        0.0
    };
    Ok(ScaledDeltas {
        window: *window,
        n_max,
        cutoff,
        i: anchors.start,
        end,
        n: 1,
        density,
    })
}

pub struct ScaledDeltas<'a> {
    window: ZeroWindow<'a>,
    n_max: usize,
    cutoff: f64,
    i: usize,
    end: usize,
    n: usize,
    density: f64,
}

impl Iterator for ScaledDeltas<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let offsets = self.window.offsets();
        while self.i < self.end && self.i + 1 < offsets.len() {
            if self.n <= self.n_max && self.i + self.n < offsets.len() {
                let v = (offsets[self.i + self.n] - offsets[self.i]) * self.density;
                // Scaled differences grow with n for a fixed i.
                if v <= self.cutoff {
                    self.n += 1;
                    return Some(v);
                }
            }
            self.i += 1;
            self.n = 1;
            if self.i < self.end && self.i + 1 < offsets.len() {
                self.density = mean_density(self.window.ordinate(self.i)).unwrap_or(0.0);
            }
        }
        None
    }
}

/// Smallest lag whose minimum scaled difference exceeds `cutoff`, so that
/// lags `1..=result` capture every pair closer than `cutoff`.
pub fn pair_lag_bound(window: &ZeroWindow<'_>, cutoff: f64) -> Result<usize, EnsembleError> {
    if !(cutoff > 0.0) {
        return Err(EnsembleError::Cutoff(cutoff));
    }
    let offsets = window.offsets();
    let density: Vec<f64> = (0..offsets.len())
        .map(|i| mean_density(window.ordinate(i)))
        .collect::<Result<_, _>>()?;
    for n in 1..offsets.len() {
        let min = (0..offsets.len() - n)
            .map(|i| (offsets[i + n] - offsets[i]) * density[i])
            .fold(f64::INFINITY, f64::min);
        if min > cutoff {
            return Ok(n);
        }
    }
    Ok(offsets.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::{parse_zero_table, window, TableFormat, ZeroTable};

    fn three() -> ZeroTable {
        parse_zero_table("14.134725\n21.022040\n25.010858\n".as_bytes(), TableFormat::Auto).unwrap()
    }

    #[test]
    fn deltas_at_lags() {
        let t = three();
        let w = ZeroWindow::full(&t).unwrap();
        let d1: Vec<f64> = delta_stream(&w, 1).unwrap().collect();
        assert!((d1[0] - 6.887315).abs() < 1e-9 && (d1[1] - 3.988818).abs() < 1e-9);
        let d2: Vec<f64> = delta_stream(&w, 2).unwrap().collect();
        assert_eq!(d2.len(), 1);
        assert!((d2[0] - 10.876133).abs() < 1e-9);
        assert!(matches!(delta_stream(&w, 3), Err(EnsembleError::Lag { .. })));
        assert!(matches!(delta_stream(&w, 0), Err(EnsembleError::Lag { .. })));
    }

    #[test]
    fn small_ensemble() {
        let t = three();
        let w = ZeroWindow::full(&t).unwrap();
        let e = build_ensemble(&w, 2, BinningSpec::new(0.0, 12.0, 12).unwrap()).unwrap();
        let h1 = e.lag(1).unwrap().histogram.counts();
        assert_eq!((h1[3], h1[6]), (1, 1));
        assert_eq!(e.lag(2).unwrap().histogram.counts()[10], 1);
        assert_eq!(e.lag(2).unwrap().report().variance, None);
        assert_eq!(e.superpose(1, 2).unwrap().mass(), 3);
        assert_eq!(e.superpose(2, 2).unwrap(), e.lag(2).unwrap().histogram);
        assert!(matches!(e.superpose(2, 1), Err(EnsembleError::Range { .. })));
        assert!(matches!(e.superpose(0, 1), Err(EnsembleError::Range { .. })));
        assert!(matches!(
            build_ensemble(&w, 3, BinningSpec::new(0.0, 12.0, 12).unwrap()),
            Err(EnsembleError::Lag { .. })
        ));
    }

    #[test]
    fn scaled_stream_basics() {
        let t = ZeroTable::from_offsets(0, vec![100.0, 100.5]).unwrap();
        let w = ZeroWindow::full(&t).unwrap();
        let v: Vec<f64> = scaled_delta_stream(&w, 5, 10.0).unwrap().collect();
        assert_eq!(v, vec![0.5 * mean_density(100.0).unwrap()]);

        let t = three();
        let w = ZeroWindow::full(&t).unwrap();
        assert_eq!(scaled_delta_stream(&w, 2, 0.001).unwrap().count(), 0);
        assert!(matches!(scaled_delta_stream(&w, 2, 0.0), Err(EnsembleError::Cutoff(_))));

        let low = ZeroTable::from_offsets(0, vec![1.0, 2.0]).unwrap();
        let w = window(&low, 0, 2).unwrap();
        assert!(matches!(scaled_delta_stream(&w, 1, 1.0), Err(EnsembleError::Zero(_))));
    }

    #[test]
    fn csv_layout() {
        let t = three();
        let w = ZeroWindow::full(&t).unwrap();
        let e = build_ensemble(&w, 2, BinningSpec::new(0.0, 12.0, 3).unwrap()).unwrap();
        let mut out = Vec::new();
        e.write_moments_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,count,mean,variance,skewness,kurtosis,excess_kurtosis");
        assert!(lines[2].starts_with("2,1,") && lines[2].ends_with("NA,NA,NA,NA"));
        let mut out = Vec::new();
        e.write_histograms_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 3);
        assert_eq!(text.lines().nth(1).unwrap(), "1,0,4,1");
    }
}
