//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Two-pass central moment sums `[M2, M3, M4]` and the matching absolute
/// sums `sum |x - mean|^k`, which set the scale for relative errors.
pub struct TwoPass {
    pub mean: f64,
    pub m: [f64; 3],
    pub abs: [f64; 3],
}

pub fn two_pass(xs: &[f64]) -> TwoPass {
    let n = xs.len() as f64;
    let mean0 = compensated_sum(xs.iter().copied()) / n;
    // One refinement step removes the rounding of the first mean.
    let mean = mean0 + compensated_sum(xs.iter().map(|x| x - mean0)) / n;
    let d = |k: i32| compensated_sum(xs.iter().map(|x| (x - mean).powi(k)));
    let a = |k: i32| compensated_sum(xs.iter().map(|x| (x - mean).abs().powi(k)));
    TwoPass {
        mean,
        m: [d(2), d(3), d(4)],
        abs: [a(2), a(3), a(4)],
    }
}

/// Exact difference of two non-negative decimal literals, in units of
/// `10^-scale`, via `i128`.
pub fn decimal_diff_scaled(a: &str, b: &str, scale: usize) -> i128 {
    fn to_units(s: &str, scale: usize) -> i128 {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        assert!(frac.len() <= scale);
        let digits = format!("{int}{frac:0<scale$}");
        digits.parse().unwrap()
    }
    to_units(a, scale) - to_units(b, scale)
}

/// Adaptive Simpson integral of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // Split first so narrow peaks cannot hide between the initial nodes.
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (f0, f1, fm) = (f(x0), f(x1), f(0.5 * (x0 + x1)));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            step(f, x0, x1, f0, fm, f1, whole, tol / pieces as f64, 40)
        })
        .sum()
}
