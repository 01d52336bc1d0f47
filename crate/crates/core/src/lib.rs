//! Statistics of differences of Riemann zeta zeros.
//!
//! The pipeline reads a table of zero ordinates ([`zeros`]), builds per-lag
//! distributions of `gamma(i+n) - gamma(i)` ([`ensemble`]) from one-pass
//! moments ([`moments`]) and histograms ([`histogram`]), fits Johnson
//! densities to them ([`johnson`]), compares unfolded differences with the
//! GUE pair correlation ([`pair_correlation`]) and reads the positions of
//! the lowest zeros back off the moment profiles ([`inference`]).
//!
//! Heavy loops run on rayon when the default `parallel` feature is on; see
//! [`par::Execution`].

pub mod ensemble;
pub mod histogram;
pub mod inference;
pub mod johnson;
pub mod moments;
pub mod pair_correlation;
pub mod par;
pub mod zeros;

pub use ensemble::{build_ensemble, build_ensemble_with, delta_stream, scaled_delta_stream, DeltaEnsemble};
pub use histogram::{BinningSpec, Histogram};
pub use johnson::{JohnsonFamily, JohnsonParams};
pub use moments::{MomentReport, MomentSummary};
pub use par::Execution;
pub use zeros::{parse_unchecked, parse_zero_table, validate, window, TableFormat, ZeroError, ZeroTable, ZeroWindow};
