//! Fixed-width histograms with explicit underflow and overflow counters.

use std::io::{self, Write};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HistogramError {
    #[error("invalid binning: lo={lo}, hi={hi}, bins={bins}")]
    InvalidBinning { lo: f64, hi: f64, bins: usize },
    #[error("histograms have different binning")]
    BinningMismatch,
}

/// Uniform bins `[lo + k*w, lo + (k+1)*w)` covering `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinningSpec {
    lo: f64,
    hi: f64,
    bins: usize,
}

impl BinningSpec {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self, HistogramError> {
        let ok = lo.is_finite() && hi.is_finite() && lo < hi && bins > 0 && (hi - lo) / bins as f64 > 0.0;
        if !ok {
            return Err(HistogramError::InvalidBinning { lo, hi, bins });
        }
        Ok(BinningSpec { lo, hi, bins })
    }

    /// Bins of width `width` from `lo` up to the first edge at or past `hi`.
    pub fn with_width(lo: f64, hi: f64, width: f64) -> Result<Self, HistogramError> {
        if !(width > 0.0) || !(hi > lo) {
            return Err(HistogramError::InvalidBinning { lo, hi, bins: 0 });
        }
        let bins = ((hi - lo) / width - 1e-9).ceil().max(1.0) as usize;
        Self::new(lo, lo + bins as f64 * width, bins)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn bin_count(&self) -> usize {
        self.bins
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    /// Lower edge of bin `k`; `edge(bin_count())` is `hi`.
    pub fn edge(&self, k: usize) -> f64 {
        if k == self.bins {
            self.hi
        } else {
            self.lo + k as f64 * self.width()
        }
    }

    pub fn center(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.width()
    }

    /// Where `x` falls.
    #[inline]
    pub fn locate(&self, x: f64) -> Slot {
        if x < self.lo {
            return Slot::Underflow;
        }
        if x >= self.hi || x.is_nan() {
            return Slot::Overflow;
        }
        let k = ((x - self.lo) / self.width()) as usize;
        Slot::Bin(k.min(self.bins - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Underflow,
    Bin(usize),
    Overflow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    binning: BinningSpec,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
}

impl Histogram {
    pub fn new(binning: BinningSpec) -> Self {
        Histogram {
            binning,
            counts: vec![0; binning.bin_count()],
            underflow: 0,
            overflow: 0,
        }
    }

    /// NaN counts as overflow so that mass is always conserved.
    #[inline]
    pub fn add(&mut self, x: f64) {
        match self.binning.locate(x) {
            Slot::Underflow => self.underflow += 1,
            Slot::Bin(k) => self.counts[k] += 1,
            Slot::Overflow => self.overflow += 1,
        }
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<(), HistogramError> {
        if self.binning != other.binning {
            return Err(HistogramError::BinningMismatch);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(())
    }

    pub fn binning(&self) -> &BinningSpec {
        &self.binning
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// All accumulated values, including under- and overflow.
    pub fn mass(&self) -> u64 {
        self.in_range() + self.underflow + self.overflow
    }

    /// Empirical CDF at edge `k` (`k` in `0..=bin_count`), counting underflow.
    pub fn cdf_at_edge(&self, k: usize) -> f64 {
        let below: u64 = self.underflow + self.counts[..k].iter().sum::<u64>();
        below as f64 / self.mass() as f64
    }

    /// Value at cumulative probability `p`, interpolating linearly inside
    /// the bin that contains it. Returns `None` if `p` falls into the
    /// underflow or overflow mass, or the histogram is empty.
    pub fn quantile(&self, p: f64) -> Option<f64> {
        let mass = self.mass();
        if mass == 0 || !(0.0..=1.0).contains(&p) {
            return None;
        }
        let target = p * mass as f64;
        let mut below = self.underflow as f64;
        if target < below {
            return None;
        }
        for (k, &c) in self.counts.iter().enumerate() {
            let c = c as f64;
            if c > 0.0 && target <= below + c {
                let frac = (target - below) / c;
                return Some(self.binning.edge(k) + frac * self.binning.width());
            }
            below += c;
        }
        None
    }

    /// Rows `bin_lo,bin_hi,count`, each prefixed by `prefix` when non-empty.
    pub fn write_rows<W: Write>(&self, out: &mut W, prefix: &str) -> io::Result<()> {
        for (k, c) in self.counts.iter().enumerate() {
            writeln!(
                out,
                "{prefix}{},{},{}",
                self.binning.edge(k),
                self.binning.edge(k + 1),
                c
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_validation() {
        assert!(BinningSpec::new(0.0, 1.0, 10).is_ok());
        assert!(BinningSpec::new(1.0, 1.0, 10).is_err());
        assert!(BinningSpec::new(0.0, 1.0, 0).is_err());
        assert!(BinningSpec::new(f64::NAN, 1.0, 3).is_err());
        let b = BinningSpec::with_width(0.0, 1.01, 0.05).unwrap();
        assert_eq!(b.bin_count(), 21);
        assert!((b.width() - 0.05).abs() < 1e-15);
        assert_eq!(BinningSpec::with_width(0.0, 1.0, 0.25).unwrap().bin_count(), 4);
    }

    #[test]
    fn placement_and_mass() {
        let mut h = Histogram::new(BinningSpec::new(0.0, 12.0, 12).unwrap());
        for x in [6.887315, 3.988818, 10.876133, -1.0, 12.0, 100.0, f64::NAN] {
            h.add(x);
        }
        assert_eq!(h.counts()[6], 1);
        assert_eq!(h.counts()[3], 1);
        assert_eq!(h.counts()[10], 1);
        assert_eq!(h.underflow(), 1);
        assert_eq!(h.overflow(), 3);
        assert_eq!(h.mass(), 7);
    }

    #[test]
    fn merge_requires_same_binning() {
        let mut a = Histogram::new(BinningSpec::new(0.0, 1.0, 4).unwrap());
        let b = Histogram::new(BinningSpec::new(0.0, 1.0, 5).unwrap());
        assert_eq!(a.merge(&b), Err(HistogramError::BinningMismatch));
    }

    #[test]
    fn quantiles_interpolate() {
        let mut h = Histogram::new(BinningSpec::new(0.0, 4.0, 4).unwrap());
        for x in [0.5, 1.5, 2.5, 3.5] {
            h.add(x);
        }
        assert_eq!(h.quantile(0.5), Some(2.0));
        assert_eq!(h.quantile(0.125), Some(0.5));
        assert_eq!(h.cdf_at_edge(1), 0.25);
        assert_eq!(h.cdf_at_edge(4), 1.0);
    }
}
