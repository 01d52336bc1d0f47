//! Locating the smallest zeta zeros from per-lag moment profiles.
//!
//! A lag whose difference distribution is centred on a zero shows a local
//! variance maximum, a nearby kurtosis minimum and a +/- flip of skewness.

use serde::Serialize;
use thiserror::Error;

use crate::ensemble::DeltaEnsemble;

/// Candidates at most this many lags apart are merged, keeping the higher variance.
pub const MERGE_LAGS: usize = 2;

/// Half-width of the neighbourhood a variance maximum must dominate.
const PEAK_HALFWIDTH: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("need at least 3 lags, got {0}")]
    TooFewLags(usize),
    #[error("need at least {needed} variance peaks in each profile, found {a} and {b}")]
    InsufficientPeaks { needed: usize, a: usize, b: usize },
}

/// Per-lag statistics; index `k` holds lag `lags[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentProfile {
    pub lags: Vec<usize>,
    pub mean: Vec<Option<f64>>,
    pub variance: Vec<Option<f64>>,
    pub skewness: Vec<Option<f64>>,
    pub kurtosis: Vec<Option<f64>>,
}

impl MomentProfile {
    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    /// Profile with every statistic present, for synthetic inputs.
    pub fn from_values(mean: Vec<f64>, variance: Vec<f64>, skewness: Vec<f64>, kurtosis: Vec<f64>) -> Self {
        let wrap = |v: Vec<f64>| v.into_iter().map(Some).collect();
        MomentProfile {
            lags: (1..=mean.len()).collect(),
            mean: wrap(mean),
            variance: wrap(variance),
            skewness: wrap(skewness),
            kurtosis: wrap(kurtosis),
        }
    }
}

pub fn profiles(ensemble: &DeltaEnsemble) -> Result<MomentProfile, InferenceError> {
    if ensemble.n_max() < 3 {
        return Err(InferenceError::TooFewLags(ensemble.n_max()));
    }
    let reports: Vec<_> = ensemble.lags().iter().map(|r| (r.lag, r.report())).collect();
    Ok(MomentProfile {
        lags: reports.iter().map(|(l, _)| *l).collect(),
        mean: reports.iter().map(|(_, r)| r.mean).collect(),
        variance: reports.iter().map(|(_, r)| r.variance).collect(),
        skewness: reports.iter().map(|(_, r)| r.skewness).collect(),
        kurtosis: reports.iter().map(|(_, r)| r.kurtosis).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    VarianceMax,
    KurtosisMin,
    SkewFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCandidate {
    pub lag: usize,
    /// Mean difference at `lag`, in ordinate units.
    pub location: f64,
    pub evidence: Vec<Evidence>,
    pub score: usize,
}

/// Centred moving average; undefined entries are skipped and the window is
/// clipped at both ends.
fn smooth(values: &[Option<f64>], halfwidth: usize) -> Vec<Option<f64>> {
    if halfwidth == 0 {
        return values.to_vec();
    }
    (0..values.len())
        .map(|k| {
            values[k]?;
            let lo = k.saturating_sub(halfwidth);
            let hi = (k + halfwidth + 1).min(values.len());
            let (sum, n) = values[lo..hi]
                .iter()
                .flatten()
                .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
            Some(sum / n as f64)
        })
        .collect()
}

fn is_strict_max(v: &[Option<f64>], k: usize, halfwidth: usize) -> bool {
    if k < halfwidth || k + halfwidth >= v.len() {
        return false;
    }
    let Some(c) = v[k] else { return false };
    (k - halfwidth..=k + halfwidth)
        .filter(|&j| j != k)
        .all(|j| v[j].is_some_and(|x| c > x))
}

fn is_local_min(v: &[Option<f64>], k: usize) -> bool {
    if k == 0 || k + 1 >= v.len() {
        return false;
    }
    match (v[k - 1], v[k], v[k + 1]) {
        (Some(a), Some(b), Some(c)) => b < a && b < c,
        _ => false,
    }
}

/// Lag indices of strict variance maxima after smoothing.
fn variance_peaks(profile: &MomentProfile, smoothing_halfwidth: usize) -> Vec<usize> {
    let var = smooth(&profile.variance, smoothing_halfwidth);
    (0..profile.len()).filter(|&k| is_strict_max(&var, k, PEAK_HALFWIDTH)).collect()
}

pub fn detect_candidates(profile: &MomentProfile, smoothing_halfwidth: usize) -> Vec<ZeroCandidate> {
    let var = smooth(&profile.variance, smoothing_halfwidth);
    let kurt = smooth(&profile.kurtosis, smoothing_halfwidth);
    let skew = &profile.skewness;
    let n = profile.len();

    let mut peaks: Vec<usize> = variance_peaks(profile, smoothing_halfwidth)
        .into_iter()
        .filter(|&k| profile.mean[k].is_some_and(|m| m > 0.0))
        .collect();

    // Merge near-ties, keeping the higher variance.
    let mut merged: Vec<usize> = Vec::with_capacity(peaks.len());
    for k in peaks.drain(..) {
        match merged.last_mut() {
            Some(prev) if k - *prev <= MERGE_LAGS => {
                if var[k] > var[*prev] {
                    *prev = k;
                }
            }
            _ => merged.push(k),
        }
    }

    merged
        .into_iter()
        .map(|k| {
            let mut evidence = vec![Evidence::VarianceMax];
            let near = k.saturating_sub(1)..=(k + 1).min(n - 1);
            if near.clone().any(|j| is_local_min(&kurt, j)) {
                evidence.push(Evidence::KurtosisMin);
            }
            // A +/- flip between consecutive lags both within one lag of k.
            let flips = (k.saturating_sub(1)..=k)
                .filter(|&j| j + 1 < n)
                .any(|j| matches!((skew[j], skew[j + 1]), (Some(a), Some(b)) if a > 0.0 && b < 0.0));
            if flips {
                evidence.push(Evidence::SkewFlip);
            }
            ZeroCandidate {
                lag: profile.lags[k],
                location: profile.mean[k].expect("filtered above"),
                score: evidence.len(),
                evidence,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkewClass {
    Consistent,
    Inconsistent,
    /// Mean at a zero or a midpoint, above the last reference zero, or
    /// skewness undefined.
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkewSignReport {
    pub lags: Vec<usize>,
    pub classes: Vec<SkewClass>,
    pub consistent: usize,
    pub considered: usize,
    pub fraction: f64,
}

/// Means this close to a zero or a midpoint count as sitting on it.
const BOUNDARY_EPS: f64 = 1e-9;

/// Checks that each lag's skewness points toward the nearest reference zero:
/// positive when the lag mean lies below it, negative when above.
///
/// Lags whose mean lies above the last reference zero are excluded, as the
/// nearest zero beyond the list is unknown.
pub fn skew_sign_structure(profile: &MomentProfile, reference_zeros: &[f64]) -> SkewSignReport {
    let classes: Vec<SkewClass> = (0..profile.len())
        .map(|k| {
            let (Some(m), Some(s)) = (profile.mean[k], profile.skewness[k]) else {
                return SkewClass::Excluded;
            };
            match reference_zeros.last() {
                Some(&last) if m <= last => {}
                _ => return SkewClass::Excluded,
            }
            // Nearest zero and the distance to the midpoint separating it
            // from the next nearest.
            let idx = reference_zeros.partition_point(|&z| z < m);
            let above = reference_zeros.get(idx).copied();
            let below = idx.checked_sub(1).map(|i| reference_zeros[i]);
            let nearest = match (below, above) {
                (Some(b), Some(a)) => {
                    let mid = 0.5 * (a + b);
                    if (m - mid).abs() <= BOUNDARY_EPS {
                        return SkewClass::Excluded;
                    }
                    if m < mid {
                        b
                    } else {
                        a
                    }
                }
                (Some(b), None) => b,
                (None, Some(a)) => a,
                (None, None) => return SkewClass::Excluded,
            };
            if (m - nearest).abs() <= BOUNDARY_EPS {
                return SkewClass::Excluded;
            }
            let expected_positive = m < nearest;
            if (expected_positive && s > 0.0) || (!expected_positive && s < 0.0) {
                SkewClass::Consistent
            } else {
                SkewClass::Inconsistent
            }
        })
        .collect();
    let consistent = classes.iter().filter(|c| **c == SkewClass::Consistent).count();
    let considered = classes.iter().filter(|c| **c != SkewClass::Excluded).count();
    SkewSignReport {
        lags: profile.lags.clone(),
        classes,
        consistent,
        considered,
        fraction: if considered == 0 {
            0.0
        } else {
            consistent as f64 / considered as f64
        },
    }
}

impl SkewSignReport {
    /// Restricts the report to lags in `from..=to`.
    pub fn restrict(&self, from: usize, to: usize) -> SkewSignReport {
        let (lags, classes): (Vec<usize>, Vec<SkewClass>) = self
            .lags
            .iter()
            .zip(&self.classes)
            .filter(|(l, _)| (from..=to).contains(*l))
            .map(|(l, c)| (*l, *c))
            .unzip();
        let consistent = classes.iter().filter(|c| **c == SkewClass::Consistent).count();
        let considered = classes.iter().filter(|c| **c != SkewClass::Excluded).count();
        SkewSignReport {
            lags,
            classes,
            consistent,
            considered,
            fraction: if considered == 0 {
                0.0
            } else {
                consistent as f64 / considered as f64
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub candidate: ZeroCandidate,
    pub reference: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_candidates: Vec<ZeroCandidate>,
    pub unmatched_references: Vec<f64>,
}

/// Greedy matching: candidate/reference pairs within `tolerance` are taken
/// in order of increasing error, ties going to the lower reference. Each
/// candidate and each reference is used at most once.
pub fn match_candidates(candidates: &[ZeroCandidate], reference_zeros: &[f64], tolerance: f64) -> MatchReport {
    let mut options: Vec<(f64, usize, usize)> = Vec::new();
    for (ci, c) in candidates.iter().enumerate() {
        for (ri, r) in reference_zeros.iter().enumerate() {
            let err = (c.location - r).abs();
            if err <= tolerance {
                options.push((err, ri, ci));
            }
        }
    }
    options.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut cand_used = vec![false; candidates.len()];
    let mut ref_used = vec![false; reference_zeros.len()];
    let mut pairs = Vec::new();
    for (err, ri, ci) in options {
        if cand_used[ci] || ref_used[ri] {
            continue;
        }
        cand_used[ci] = true;
        ref_used[ri] = true;
        pairs.push(MatchedPair {
            candidate: candidates[ci].clone(),
            reference: reference_zeros[ri],
            error: err,
        });
    }
    pairs.sort_by(|a, b| a.reference.total_cmp(&b.reference));
    MatchReport {
        pairs,
        unmatched_candidates: candidates
            .iter()
            .zip(&cand_used)
            .filter(|(_, u)| !**u)
            .map(|(c, _)| c.clone())
            .collect(),
        unmatched_references: reference_zeros
            .iter()
            .zip(&ref_used)
            .filter(|(_, u)| !**u)
            .map(|(r, _)| *r)
            .collect(),
    }
}

/// Minimum number of peaks per profile for a stretch estimate.
pub const MIN_STRETCH_PEAKS: usize = 3;

/// Least-squares slope through the origin of `peaks_b` against `peaks_a`,
/// pairing peaks in order and ignoring the surplus of the longer list.
pub fn stretch_ratio(peaks_a: &[f64], peaks_b: &[f64]) -> Result<f64, InferenceError> {
    if peaks_a.len() < MIN_STRETCH_PEAKS || peaks_b.len() < MIN_STRETCH_PEAKS {
        return Err(InferenceError::InsufficientPeaks {
            needed: MIN_STRETCH_PEAKS,
            a: peaks_a.len(),
            b: peaks_b.len(),
        });
    }
    let (ab, aa) = peaks_a
        .iter()
        .zip(peaks_b)
        .fold((0.0, 0.0), |(ab, aa), (a, b)| (ab + a * b, aa + a * a));
    Ok(ab / aa)
}

/// How much profile `b`'s variance pattern is stretched along the lag axis
/// relative to profile `a`.
pub fn variance_stretch(
    profile_a: &MomentProfile,
    profile_b: &MomentProfile,
    smoothing_halfwidth: usize,
) -> Result<f64, InferenceError> {
    let lags = |p: &MomentProfile| -> Vec<f64> {
        variance_peaks(p, smoothing_halfwidth)
            .into_iter()
            .map(|k| p.lags[k] as f64)
            .collect()
    };
    stretch_ratio(&lags(profile_a), &lags(profile_b))
}
