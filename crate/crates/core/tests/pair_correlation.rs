mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use zeta_deltas::pair_correlation::{estimate, estimate_with, r2_theory};
use zeta_deltas::zeros::mean_density;
use zeta_deltas::{Execution, ZeroTable, ZeroWindow};

const BASE: u128 = 1_000_000;

/// Zeros at height `BASE` whose unfolded gaps are `gap(rng)`.
fn unfolded(len: usize, mut gap: impl FnMut() -> f64) -> ZeroTable {
    let mut offset = 0.0f64;
    let offsets = (0..len)
        .map(|_| {
            let here = offset;
            offset += gap() / mean_density(BASE as f64 + offset).unwrap();
            here
        })
        .collect();
    ZeroTable::from_offsets(BASE, offsets).unwrap()
}

#[test]
fn theory_values() {
    assert_eq!(r2_theory(0.0), 0.0);
    assert!((r2_theory(1.0) - 1.0).abs() < 1e-15);
    assert!((r2_theory(0.5) - 0.594715).abs() < 1e-6);
    assert!((r2_theory(1e-9) - (std::f64::consts::PI * 1e-9).powi(2) / 3.0).abs() < 1e-30);
    for k in 0..1000 {
        let x = k as f64 * 0.0137;
        assert_eq!(r2_theory(x), r2_theory(-x));
    }
}

#[test]
fn rigid_lattice_concentrates_at_integers() {
    let t = unfolded(50_000, || 1.0);
    let w = ZeroWindow::full(&t).unwrap();
    let r = estimate(&w, 3.0, 60, 3).unwrap();
    let h = &r.histogram;
    let near_integer: u64 = h
        .counts()
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let c = h.binning().center(*k);
            (c - c.round()).abs() < 0.1
        })
        .map(|(_, c)| c)
        .sum();
    assert_eq!(near_integer, h.in_range());
    assert!(r.rms_deviation > 1.0, "{}", r.rms_deviation);
}

#[test]
fn poisson_zeros_are_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let t = unfolded(200_000, || Exp1.sample(&mut rng));
    let w = ZeroWindow::full(&t).unwrap();
    let r = estimate(&w, 3.0, 60, 40).unwrap();
    let mean = r.mean_density_between(0.2, 3.0).unwrap();
    assert!((mean - 1.0).abs() < 0.02, "{mean}");
    // Against flat density the deviation is the sinc^4 dip.
    let (sum, n) = r
        .centers()
        .filter(|c| *c >= 0.2)
        .fold((0.0, 0), |(s, n), c| (s + (1.0 - r2_theory(c)).powi(2), n + 1));
    let expected = (sum / n as f64).sqrt();
    assert!((r.rms_deviation - expected).abs() < 0.02, "{} vs {expected}", r.rms_deviation);
}

#[test]
fn histogram_mass_counts_close_pairs() {
    let t = common::first_100k();
    let w = zeta_deltas::window(&t, 5_000, 5_000).unwrap();
    let (cutoff, n_max) = (2.5, 12);
    let r = estimate(&w, cutoff, 50, n_max).unwrap();
    let o = w.offsets();
    let mut brute = 0u64;
    for i in 0..o.len() {
        let d = mean_density(w.ordinate(i)).unwrap();
        for n in 1..=n_max.min(o.len() - 1 - i) {
            if (o[i + n] - o[i]) * d <= cutoff {
                brute += 1;
            }
        }
    }
    assert_eq!(r.histogram.mass(), brute);
    assert!(r.normalized_density.iter().all(|d| *d >= 0.0));
    assert_eq!(r.theory.len(), 50);
}

#[test]
fn execution_mode_does_not_change_result() {
    let t = common::first_100k();
    let w = ZeroWindow::full(&t).unwrap();
    let a = estimate_with(&w, 3.0, 60, 30, Execution::Sequential).unwrap();
    let b = estimate_with(&w, 3.0, 60, 30, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_arguments() {
    let t = unfolded(100, || 1.0);
    let w = ZeroWindow::full(&t).unwrap();
    assert!(estimate(&w, 3.0, 9, 3).is_err());
    assert!(estimate(&w, 3.0, 10, 0).is_err());
    assert!(estimate(&w, 0.0, 10, 3).is_err());
    let low = ZeroTable::from_offsets(1, vec![0.0, 1.0, 2.0]).unwrap();
    assert!(estimate(&ZeroWindow::full(&low).unwrap(), 3.0, 10, 1).is_err());
}
