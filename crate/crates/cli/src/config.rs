//! Command-line arguments and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "zeta-deltas", version, about = "Statistics of differences of Riemann zeta zeros")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Check that the zero table parses and strictly increases.
    Validate,
    /// Per-lag moments and histograms of zero differences.
    Deltas,
    /// Johnson fits per lag and the skewness-kurtosis plane.
    Fit,
    /// Pair correlation of unfolded differences against the GUE curve.
    Paircorr,
    /// Zero locations read off the per-lag moment profiles.
    Infer,
}

/// Every flag can also be set through `ZETA_DELTAS_<FLAG>`.
#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Zero table: one ordinate per line, '#' comments allowed.
    #[arg(long, global = true, env = "ZETA_DELTAS_INPUT")]
    pub input: Option<PathBuf>,
    /// Ordinal of the first zero in the input file.
    #[arg(long, global = true, env = "ZETA_DELTAS_FIRST_ORDINAL", default_value_t = 1)]
    pub first_ordinal: u64,
    /// 1-based ordinal of the first zero to use [default: first in file].
    #[arg(long, global = true, env = "ZETA_DELTAS_START")]
    pub start: Option<u64>,
    /// Number of zeros in the window [default: rest of the file].
    #[arg(long, global = true, env = "ZETA_DELTAS_COUNT")]
    pub count: Option<usize>,
    /// Largest lag [default: 160; paircorr: smallest lag beyond the cutoff].
    #[arg(long, global = true, env = "ZETA_DELTAS_NMAX")]
    pub nmax: Option<usize>,
    /// Histogram bins [default: 0.05-wide bins for deltas/fit, 60 for paircorr].
    #[arg(long, global = true, env = "ZETA_DELTAS_BINS")]
    pub bins: Option<usize>,
    /// Lower histogram edge for deltas/fit.
    #[arg(long, global = true, env = "ZETA_DELTAS_LO")]
    pub lo: Option<f64>,
    /// Upper histogram edge for deltas/fit [default: (nmax + 5) mean gaps].
    #[arg(long, global = true, env = "ZETA_DELTAS_HI")]
    pub hi: Option<f64>,
    /// Largest unfolded difference for paircorr.
    #[arg(long, global = true, env = "ZETA_DELTAS_CUTOFF", default_value_t = 3.0)]
    pub cutoff: f64,
    /// Output directory, created if missing.
    #[arg(long, global = true, env = "ZETA_DELTAS_OUT", default_value = ".")]
    pub out: PathBuf,
    /// Recorded in output headers; no command currently draws random numbers.
    #[arg(long, global = true, env = "ZETA_DELTAS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core. Never changes results.
    #[arg(long, global = true, env = "ZETA_DELTAS_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Reference zeros for infer (same format as --input).
    #[arg(long, global = true, env = "ZETA_DELTAS_REFERENCE")]
    pub reference: Option<PathBuf>,
    /// Largest candidate-to-reference distance counted as a match.
    #[arg(long, global = true, env = "ZETA_DELTAS_TOLERANCE", default_value_t = 0.5)]
    pub tolerance: f64,
    /// Moving-average half-width for infer [default: 1, or 0 for windows of 10^6+ zeros].
    #[arg(long, global = true, env = "ZETA_DELTAS_SMOOTHING")]
    pub smoothing: Option<usize>,
    /// Quantile spacing s for the four-quantile Johnson fit.
    #[arg(long, global = true, env = "ZETA_DELTAS_SPACING", default_value_t = zeta_deltas::johnson::DEFAULT_QUANTILE_SPACING)]
    pub spacing: f64,
}

pub const DEFAULT_NMAX: usize = 160;
pub const DEFAULT_PAIR_BINS: usize = 60;
/// Windows at least this long default to no smoothing.
pub const UNSMOOTHED_COUNT: usize = 1_000_000;

/// Everything that determines a command's output, with defaults filled
/// in. Written into every output header. The output directory and worker
/// count are left out: neither can change the content.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: String,
    pub first_ordinal: u64,
    pub start: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub seed: u64,
}
