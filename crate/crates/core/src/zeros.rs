//! Zero tables: parsing, validation and windowing of zeta zero ordinates.
//!
//! Ordinates are stored as an exact integer `base` plus 64-bit offsets. The
//! split happens on the decimal text, so differences of neighbouring zeros
//! keep their sub-nanounit precision even at heights around 1e22 where a
//! single `f64` cannot resolve the integer part.

use std::f64::consts::PI;
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Largest allowed span `last - first` of a table, in ordinate units.
///
/// Offsets below 2^23 have an ulp of at most 2^-29, so every stored offset is
/// within 1e-9 of its decimal literal.
pub const MAX_SPAN: u128 = 1 << 23;

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error("line {line}: not a decimal literal: {text:?}")]
    Parse { line: usize, text: String },
    #[error("line {line}: integer part does not fit in 128 bits")]
    Overflow { line: usize },
    #[error("zero at index {index} (line {line}) is not greater than its predecessor")]
    Order { index: usize, line: usize },
    #[error("input contains no zeros")]
    Empty,
    #[error("line {line}: table spans more than {max} ordinate units from its first zero")]
    Span { line: usize, max: u128 },
    #[error("window [{start}, {start}+{count}) out of range for table of length {len}")]
    Bounds { start: usize, count: usize, len: usize },
    #[error("window needs at least 2 zeros, got {0}")]
    WindowTooSmall(usize),
    #[error("mean density needs ordinate > 2*pi, got {0}")]
    Domain(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    /// One literal per line; blank and `#` lines are rejected as parse errors.
    Plain,
    /// One literal per line, skipping blank lines and `#` comments.
    #[default]
    Auto,
}

/// An immutable table of zero ordinates, `zero_k = base + offsets[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    base: u128,
    offsets: Vec<f64>,
    lines: Vec<usize>,
    start_ordinal: Option<u64>,
    source: String,
}

/// A decimal literal split at the decimal point.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Literal {
    int: u128,
    frac: f64,
}

fn parse_literal(text: &str, line: usize) -> Result<Literal, ZeroError> {
    let bad = || ZeroError::Parse {
        line,
        text: text.to_string(),
    };
    let (int_txt, frac_txt) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_txt.is_empty() && frac_txt.is_empty() {
        return Err(bad());
    }
    if !int_txt.bytes().all(|b| b.is_ascii_digit()) || !frac_txt.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut int: u128 = 0;
    for b in int_txt.bytes() {
        int = int
            .checked_mul(10)
            .and_then(|v| v.checked_add(u128::from(b - b'0')))
            .ok_or(ZeroError::Overflow { line })?;
    }
    // "0.<digits>" is a decimal in [0, 1); std's parser rounds it correctly.
    let frac = if frac_txt.is_empty() {
        0.0
    } else {
        format!("0.{frac_txt}").parse::<f64>().map_err(|_| bad())?
    };
    Ok(Literal { int, frac })
}

/// Parses one zero per line.
///
/// `base` is the integer part of the first zero; each offset is the exact
/// integer difference to `base` plus the fractional digits, so no
/// full-magnitude float is ever formed.
pub fn parse_zero_table<R: BufRead>(reader: R, format: TableFormat) -> Result<ZeroTable, ZeroError> {
    let table = parse_unchecked(reader, format)?;
    if let Some(index) = table.first_order_violation() {
        return Err(ZeroError::Order {
            index,
            line: table.lines[index],
        });
    }
    Ok(table)
}

/// Like [`parse_zero_table`] but keeps out-of-order entries so that
/// [`validate`] can report all of them.
pub fn parse_unchecked<R: BufRead>(reader: R, format: TableFormat) -> Result<ZeroTable, ZeroError> {
    let mut base = None;
    let mut offsets = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if format == TableFormat::Auto && (text.is_empty() || text.starts_with('#')) {
            continue;
        }
        let lit = parse_literal(text, line_no)?;
        let base = *base.get_or_insert(lit.int);
        let offset = if lit.int >= base {
            let whole = lit.int - base;
            if whole >= MAX_SPAN {
                return Err(ZeroError::Span {
                    line: line_no,
                    max: MAX_SPAN,
                });
            }
            whole as f64 + lit.frac
        } else {
            let whole = base - lit.int;
            if whole > MAX_SPAN {
                return Err(ZeroError::Span {
                    line: line_no,
                    max: MAX_SPAN,
                });
            }
            lit.frac - whole as f64
        };
        offsets.push(offset);
        lines.push(line_no);
    }
    let base = base.ok_or(ZeroError::Empty)?;
    Ok(ZeroTable {
        base,
        offsets,
        lines,
        start_ordinal: None,
        source: String::new(),
    })
}

impl ZeroTable {
    /// Builds a table from offsets relative to `base`, checking the order
    /// invariant. Line numbers are synthesized as `k + 1`.
    pub fn from_offsets(base: u128, offsets: Vec<f64>) -> Result<Self, ZeroError> {
        if offsets.is_empty() {
            return Err(ZeroError::Empty);
        }
        let lines = (1..=offsets.len()).collect();
        let table = ZeroTable {
            base,
            offsets,
            lines,
            start_ordinal: None,
            source: String::new(),
        };
        if let Some(index) = table.first_order_violation() {
            return Err(ZeroError::Order { index, line: index + 1 });
        }
        if table.offsets.iter().any(|o| !o.is_finite() || *o < 0.0) {
            return Err(ZeroError::Parse {
                line: 1,
                text: "non-finite or negative offset".into(),
            });
        }
        Ok(table)
    }

    pub fn with_start_ordinal(mut self, ordinal: u64) -> Self {
        self.start_ordinal = Some(ordinal);
        self
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn base(&self) -> u128 {
        self.base
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn start_ordinal(&self) -> Option<u64> {
        self.start_ordinal
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Input line number of zero `k` (1-based).
    pub fn line(&self, k: usize) -> usize {
        self.lines[k]
    }

    /// Full-magnitude ordinate as `f64`. Only relative precision survives;
    /// use offsets for differences.
    pub fn ordinate(&self, k: usize) -> f64 {
        self.base as f64 + self.offsets[k]
    }

    /// Formats zero `k` as a decimal with `decimals` fractional digits,
    /// truncating. The offset is nudged two ulps away from the base first,
    /// so a literal stored as the float just below it is not cut a digit
    /// short.
    pub fn format_zero(&self, k: usize, decimals: usize) -> String {
        let offset = self.offsets[k];
        let guard = 2.0 * (offset.abs().next_up() - offset.abs());
        let scale = 10i128.pow(decimals as u32);
        let units = if offset >= 0.0 {
            decimal_units(offset + guard, decimals).0
        } else {
            // Truncating base - |offset| towards zero rounds |offset| up.
            let (units, cut) = decimal_units((-offset - guard).max(0.0), decimals);
            -(units + i128::from(cut))
        };
        let total = self.base as i128 * scale + units;
        let int = total.div_euclid(scale);
        let rem = total.rem_euclid(scale);
        if decimals == 0 {
            int.to_string()
        } else {
            format!("{int}.{rem:0decimals$}")
        }
    }

    fn first_order_violation(&self) -> Option<usize> {
        self.offsets.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 1)
    }
}

/// `floor(v * 10^decimals)` for `v >= 0`, and whether anything was cut.
/// Uses the exact decimal expansion of `v`, so no rounding creeps in.
fn decimal_units(v: f64, decimals: usize) -> (i128, bool) {
    // Rounding at the 64th digit could only reach the cut if every digit
    // in between were 9.
    let text = format!("{v:.64}");
    let (whole, frac) = text.split_once('.').expect("fixed-point rendering");
    let (kept, cut) = frac.split_at(decimals);
    let mut units = whole.parse::<i128>().expect("integer part") * 10i128.pow(decimals as u32);
    if !kept.is_empty() {
        units += kept.parse::<i128>().expect("fraction digits");
    }
    (units, cut.bytes().any(|b| b != b'0'))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `zero[index] <= zero[index - 1]`.
    NotIncreasing { index: usize, line: usize },
    NonFinite { index: usize, line: usize },
    /// The first offset is outside `[0, 1)`.
    BaseMismatch { offset: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotIncreasing { index, line } => {
                write!(f, "line {line}: zero {index} is not greater than its predecessor")
            }
            Violation::NonFinite { index, line } => write!(f, "line {line}: zero {index} is not finite"),
            Violation::BaseMismatch { offset } => write!(f, "first offset {offset} outside [0, 1)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub count: usize,
    pub min_gap: Option<f64>,
    pub max_gap: Option<f64>,
    pub mean_gap: Option<f64>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Read-only invariant check. Gap statistics cover adjacent pairs in file
/// order, including any non-increasing ones.
pub fn validate(table: &ZeroTable) -> ValidationReport {
    let offsets = &table.offsets;
    let mut violations = Vec::new();
    if let Some(&first) = offsets.first() {
        if !(0.0..1.0).contains(&first) {
            violations.push(Violation::BaseMismatch { offset: first });
        }
    }
    for (k, o) in offsets.iter().enumerate() {
        if !o.is_finite() {
            violations.push(Violation::NonFinite {
                index: k,
                line: table.lines[k],
            });
        }
    }
    let mut min_gap = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    for (k, w) in offsets.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            violations.push(Violation::NotIncreasing {
                index: k + 1,
                line: table.lines[k + 1],
            });
        }
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
    }
    let n = offsets.len();
    let (min_gap, max_gap, mean_gap) = if n >= 2 {
        (
            Some(min_gap),
            Some(max_gap),
            Some((offsets[n - 1] - offsets[0]) / (n - 1) as f64),
        )
    } else {
        (None, None, None)
    };
    ValidationReport {
        count: n,
        min_gap,
        max_gap,
        mean_gap,
        violations,
    }
}

/// A contiguous run of zeros inside a table.
#[derive(Debug, Clone, Copy)]
pub struct ZeroWindow<'a> {
    table: &'a ZeroTable,
    start: usize,
    count: usize,
}

pub fn window(table: &ZeroTable, start_index: usize, count: usize) -> Result<ZeroWindow<'_>, ZeroError> {
    if count < 2 {
        return Err(ZeroError::WindowTooSmall(count));
    }
    match start_index.checked_add(count) {
        Some(end) if end <= table.len() => Ok(ZeroWindow {
            table,
            start: start_index,
            count,
        }),
        _ => Err(ZeroError::Bounds {
            start: start_index,
            count,
            len: table.len(),
        }),
    }
}

impl<'a> ZeroWindow<'a> {
    pub fn full(table: &'a ZeroTable) -> Result<Self, ZeroError> {
        window(table, 0, table.len())
    }

    pub fn table(&self) -> &'a ZeroTable {
        self.table
    }

    pub fn start_index(&self) -> usize {
        self.start
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Offsets of the zeros in the window, relative to the table base.
    pub fn offsets(&self) -> &'a [f64] {
        &self.table.offsets[self.start..self.start + self.count]
    }

    pub fn ordinate(&self, i: usize) -> f64 {
        self.table.ordinate(self.start + i)
    }

    /// 1-based ordinal of the first zero in the window, when the table's is known.
    pub fn start_ordinal(&self) -> Option<u64> {
        self.table.start_ordinal.map(|o| o + self.start as u64)
    }

    /// Mean gap between consecutive zeros in the window.
    pub fn mean_gap(&self) -> f64 {
        let o = self.offsets();
        (o[o.len() - 1] - o[0]) / (o.len() - 1) as f64
    }
}

/// Expected number of zeros per unit ordinate near `t`, `ln(t/2pi)/(2pi)`.
pub fn mean_density(t: f64) -> Result<f64, ZeroError> {
    if !(t > 2.0 * PI) {
        return Err(ZeroError::Domain(t));
    }
    Ok((t / (2.0 * PI)).ln() / (2.0 * PI))
}
