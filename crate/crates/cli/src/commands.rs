//! The five subcommands.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use zeta_deltas::ensemble::{default_binning, pair_lag_bound};
use zeta_deltas::inference::{
    detect_candidates, match_candidates, profiles, skew_sign_structure, MatchReport, SkewSignReport, ZeroCandidate,
};
use zeta_deltas::johnson::{fit, goodness_of_fit, select_family, sl_boundary_kurtosis, JohnsonError, QuantileSet};
use zeta_deltas::pair_correlation;
use zeta_deltas::{
    build_ensemble, parse_unchecked, parse_zero_table, validate, window, BinningSpec, DeltaEnsemble, JohnsonFamily,
    TableFormat, ZeroTable, ZeroWindow,
};

use crate::config::{Command, Options, RunConfig, DEFAULT_NMAX, DEFAULT_PAIR_BINS, UNSMOOTHED_COUNT};
use crate::output::{header_lines, OutputFile};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// The input violated the zero-table invariants.
    Invalid,
}

/// Number of points on the lognormal boundary in the skewness-kurtosis plane.
const BOUNDARY_POINTS: usize = 200;

/// Lags over which the skew rule is summarized in the infer report.
const SKEW_LAGS: (usize, usize) = (30, 160);

pub fn run(command: Command, opts: &Options) -> Result<Outcome> {
    match command {
        Command::Validate => cmd_validate(opts),
        Command::Deltas => cmd_deltas(opts),
        Command::Fit => cmd_fit(opts),
        Command::Paircorr => cmd_paircorr(opts),
        Command::Infer => cmd_infer(opts),
    }
}

fn input_path(opts: &Options) -> Result<&Path> {
    match &opts.input {
        Some(p) => Ok(p),
        None => bail!("--input is required (or set ZETA_DELTAS_INPUT)"),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn load_table(path: &Path, first_ordinal: u64) -> Result<ZeroTable> {
    let table = parse_zero_table(open(path)?, TableFormat::Auto).with_context(|| format!("reading {}", path.display()))?;
    Ok(table
        .with_start_ordinal(first_ordinal)
        .with_source(path.display().to_string()))
}

struct Loaded {
    table: ZeroTable,
    start_index: usize,
    count: usize,
}

impl Loaded {
    fn window(&self) -> ZeroWindow<'_> {
        window(&self.table, self.start_index, self.count).expect("checked when loading")
    }
}

fn load(opts: &Options) -> Result<Loaded> {
    let table = load_table(input_path(opts)?, opts.first_ordinal)?;
    let start = opts.start.unwrap_or(opts.first_ordinal);
    if start < opts.first_ordinal {
        bail!("--start {start} precedes the first ordinal {} in the file", opts.first_ordinal);
    }
    let start_index = usize::try_from(start - opts.first_ordinal)?;
    if start_index >= table.len() {
        bail!("--start {start} is past the last zero (ordinal {})", opts.first_ordinal + table.len() as u64 - 1);
    }
    let count = opts.count.unwrap_or(table.len() - start_index);
    window(&table, start_index, count)?;
    Ok(Loaded {
        table,
        start_index,
        count,
    })
}

fn base_config(command: Command, opts: &Options, loaded: Option<&Loaded>) -> RunConfig {
    RunConfig {
        command,
        input: opts.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        first_ordinal: opts.first_ordinal,
        start: opts.start.unwrap_or(opts.first_ordinal),
        count: loaded.map_or(0, |l| l.count),
        nmax: None,
        bins: None,
        lo: None,
        hi: None,
        cutoff: None,
        spacing: None,
        smoothing: None,
        reference: None,
        tolerance: None,
        seed: opts.seed,
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn cmd_validate(opts: &Options) -> Result<Outcome> {
    let path = input_path(opts)?;
    let table = match parse_unchecked(open(path)?, TableFormat::Auto) {
        Ok(t) => t,
        Err(zeta_deltas::ZeroError::Io(e)) => return Err(e).with_context(|| format!("reading {}", path.display())),
        Err(e) => {
            println!("invalid: {e}");
            return Ok(Outcome::Invalid);
        }
    };
    let report = validate(&table);
    let mut config = base_config(Command::Validate, opts, None);
    config.count = report.count;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in header_lines(&config) {
        writeln!(out, "{line}")?;
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
    writeln!(out, "zeros: {}", report.count)?;
    writeln!(out, "min_gap: {}", opt(report.min_gap))?;
    writeln!(out, "max_gap: {}", opt(report.max_gap))?;
    writeln!(out, "mean_gap: {}", opt(report.mean_gap))?;
    writeln!(out, "violations: {}", report.violations.len())?;
    for v in &report.violations {
        writeln!(out, "{v}")?;
    }
    Ok(if report.is_clean() { Outcome::Ok } else { Outcome::Invalid })
}

/// Binning for deltas/fit: the default grid unless the user pinned edges
/// or a bin count.
fn ensemble_binning(opts: &Options, w: &ZeroWindow<'_>, n_max: usize) -> Result<BinningSpec> {
    let default = default_binning(w, n_max)?;
    let lo = opts.lo.unwrap_or(default.lo());
    let hi = opts.hi.unwrap_or(default.hi());
    Ok(match opts.bins {
        Some(bins) => BinningSpec::new(lo, hi, bins)?,
        None if opts.lo.is_none() && opts.hi.is_none() => default,
        None => BinningSpec::with_width(lo, hi, zeta_deltas::ensemble::DEFAULT_BIN_WIDTH)?,
    })
}

struct EnsembleRun {
    loaded: Loaded,
    config: RunConfig,
    n_max: usize,
    binning: BinningSpec,
}

fn prepare_ensemble(command: Command, opts: &Options) -> Result<EnsembleRun> {
    let loaded = load(opts)?;
    let w = loaded.window();
    let n_max = opts.nmax.unwrap_or(DEFAULT_NMAX);
    if n_max == 0 || n_max >= w.count() {
        bail!("--nmax {n_max} must be at least 1 and below the window count {}", w.count());
    }
    let binning = ensemble_binning(opts, &w, n_max)?;
    let mut config = base_config(command, opts, Some(&loaded));
    config.nmax = Some(n_max);
    config.bins = Some(binning.bin_count());
    config.lo = Some(binning.lo());
    config.hi = Some(binning.hi());
    Ok(EnsembleRun {
        loaded,
        config,
        n_max,
        binning,
    })
}

impl EnsembleRun {
    fn build(&self) -> Result<DeltaEnsemble> {
        Ok(build_ensemble(&self.loaded.window(), self.n_max, self.binning)?)
    }
}

fn cmd_deltas(opts: &Options) -> Result<Outcome> {
    let run = prepare_ensemble(Command::Deltas, opts)?;
    let ensemble = run.build()?;

    let mut moments = OutputFile::create(&opts.out, "deltas_moments.csv", &run.config)?;
    ensemble.write_moments_csv(moments.writer())?;

    let mut hist = OutputFile::create(&opts.out, "deltas_hist.csv", &run.config)?;
    ensemble.write_histograms_csv(hist.writer())?;

    let total = ensemble.superpose(1, run.n_max)?;
    let mut integrated = OutputFile::create(&opts.out, "deltas_integrated.csv", &run.config)?;
    let w = integrated.writer();
    writeln!(w, "# lags 1..{}; underflow {}, overflow {}", run.n_max, total.underflow(), total.overflow())?;
    writeln!(w, "bin_lo,bin_hi,count")?;
    total.write_rows(w, "")?;

    report_written(&[moments.finish()?, hist.finish()?, integrated.finish()?]);
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct FitRecord {
    lag: usize,
    family: JohnsonFamily,
    gamma: f64,
    delta: f64,
    xi: f64,
    lambda: f64,
    chi_square: f64,
    dof: i64,
    ks: f64,
    n: u64,
    skewness: f64,
    kurtosis: f64,
    /// Family of the (skewness, kurtosis) pair, which can differ from the
    /// quantile-based fit.
    #[serde(skip_serializing_if = "Option::is_none")]
    moment_family: Option<JohnsonFamily>,
}

fn fit_lag(rec: &zeta_deltas::ensemble::LagRecord, spacing: f64) -> Result<FitRecord, String> {
    let report = rec.report();
    let (Some(skewness), Some(kurtosis)) = (report.skewness, report.kurtosis) else {
        return Err("skewness or kurtosis undefined".into());
    };
    let quantiles = QuantileSet::from_histogram(&rec.histogram, spacing).map_err(|e| e.to_string())?;
    let fitted = fit(&report, &quantiles).map_err(|e| e.to_string())?;
    let gof = goodness_of_fit(&fitted.params, &rec.histogram).map_err(|e: JohnsonError| e.to_string())?;
    let p = fitted.params;
    Ok(FitRecord {
        lag: rec.lag,
        family: p.family(),
        gamma: p.gamma(),
        delta: p.delta(),
        xi: p.xi(),
        lambda: p.lambda(),
        chi_square: gof.chi_square,
        dof: gof.dof,
        ks: gof.ks_statistic,
        n: gof.n_effective,
        skewness,
        kurtosis,
        moment_family: fitted.moment_family,
    })
}

fn cmd_fit(opts: &Options) -> Result<Outcome> {
    let mut run = prepare_ensemble(Command::Fit, opts)?;
    run.config.spacing = Some(opts.spacing);
    let ensemble = run.build()?;

    // JSON Lines: one record per lag after the '#' header.
    let mut fits = OutputFile::create(&opts.out, "johnson_fits.json", &run.config)?;
    let mut plane = OutputFile::create(&opts.out, "skew_kurt_plane.csv", &run.config)?;
    writeln!(plane.writer(), "kind,lag,skewness,beta1,kurtosis,excess_kurtosis,family")?;

    let mut max_beta1: f64 = 1.0;
    for rec in ensemble.lags() {
        let report = rec.report();
        if let (Some(s), Some(k)) = (report.skewness, report.kurtosis) {
            let family = select_family(s, k).map_or_else(|_| "NA".to_string(), |f| f.to_string());
            writeln!(plane.writer(), "lag,{},{s},{},{k},{},{family}", rec.lag, s * s, k - 3.0)?;
            max_beta1 = max_beta1.max(s * s);
        }
        match fit_lag(rec, opts.spacing) {
            Ok(record) => writeln!(fits.writer(), "{}", serde_json::to_string(&record)?)?,
            Err(note) => {
                writeln!(fits.writer(), "# lag {} skipped: {note}", rec.lag)?;
                eprintln!("lag {} skipped: {note}", rec.lag);
            }
        }
    }
    for k in 0..BOUNDARY_POINTS {
        let beta1 = max_beta1 * k as f64 / (BOUNDARY_POINTS - 1) as f64;
        let beta2 = sl_boundary_kurtosis(beta1);
        writeln!(plane.writer(), "boundary,NA,{},{beta1},{beta2},{},SL", beta1.sqrt(), beta2 - 3.0)?;
    }
    report_written(&[fits.finish()?, plane.finish()?]);
    Ok(Outcome::Ok)
}

fn cmd_paircorr(opts: &Options) -> Result<Outcome> {
    let loaded = load(opts)?;
    let w = loaded.window();
    let n_max = match opts.nmax {
        Some(n) => n,
        None => pair_lag_bound(&w, opts.cutoff)?,
    };
    let bins = opts.bins.unwrap_or(DEFAULT_PAIR_BINS);
    let result = pair_correlation::estimate(&w, opts.cutoff, bins, n_max)?;

    let mut config = base_config(Command::Paircorr, opts, Some(&loaded));
    config.nmax = Some(n_max);
    config.bins = Some(bins);
    config.cutoff = Some(opts.cutoff);
    let mut out = OutputFile::create(&opts.out, "paircorr.csv", &config)?;
    let rms_from = pair_correlation::RMS_FROM;
    writeln!(out.writer(), "# rms_deviation: {} (bins centred in [{rms_from}, {}])", result.rms_deviation, opts.cutoff)?;
    writeln!(out.writer(), "# pairs: {}", result.histogram.mass())?;
    result.write_csv(out.writer())?;
    report_written(&[out.finish()?]);
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct InferReport {
    smoothing_halfwidth: usize,
    /// Mean difference at the largest lag; candidates cannot lie beyond it.
    max_location: f64,
    candidates: Vec<ZeroCandidate>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matches: Option<MatchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skew_structure: Option<SkewSummary>,
}

#[derive(Serialize)]
struct SkewSummary {
    lag_from: usize,
    lag_to: usize,
    consistent: usize,
    considered: usize,
    fraction: f64,
}

impl SkewSummary {
    fn new(report: &SkewSignReport, (lag_from, lag_to): (usize, usize)) -> Self {
        let r = report.restrict(lag_from, lag_to);
        SkewSummary {
            lag_from,
            lag_to,
            consistent: r.consistent,
            considered: r.considered,
            fraction: r.fraction,
        }
    }
}

fn cmd_infer(opts: &Options) -> Result<Outcome> {
    let mut run = prepare_ensemble(Command::Infer, opts)?;
    let smoothing = opts
        .smoothing
        .unwrap_or(if run.loaded.count >= UNSMOOTHED_COUNT { 0 } else { 1 });
    run.config.smoothing = Some(smoothing);
    let profile = profiles(&run.build()?)?;
    let candidates = detect_candidates(&profile, smoothing);
    let max_location = profile.mean.iter().flatten().copied().fold(0.0, f64::max);

    let (matches, skew_structure) = match &opts.reference {
        Some(path) => {
            run.config.reference = Some(path.display().to_string());
            run.config.tolerance = Some(opts.tolerance);
            if !(opts.tolerance > 0.0) {
                bail!("--tolerance must be positive, got {}", opts.tolerance);
            }
            let refs = load_table(path, 1)?;
            // Round-trip through the decimal rendering so the report shows the
            // literals rather than base + offset sums.
            let all: Vec<f64> = (0..refs.len())
                .map(|k| refs.format_zero(k, 12).parse().unwrap_or_else(|_| refs.ordinate(k)))
                .collect();
            // Only zeros the profile can reach count as unmatched.
            let reachable: Vec<f64> = all.iter().copied().filter(|z| *z <= max_location).collect();
            let skew = skew_sign_structure(&profile, &all);
            (
                Some(match_candidates(&candidates, &reachable, opts.tolerance)),
                Some(SkewSummary::new(&skew, SKEW_LAGS)),
            )
        }
        None => (None, None),
    };

    let report = InferReport {
        smoothing_halfwidth: smoothing,
        max_location,
        candidates,
        matches,
        skew_structure,
    };
    let mut out = OutputFile::create(&opts.out, "zero_candidates.json", &run.config)?;
    serde_json::to_writer_pretty(out.writer(), &report)?;
    writeln!(out.writer())?;
    report_written(&[out.finish()?]);
    Ok(Outcome::Ok)
}
