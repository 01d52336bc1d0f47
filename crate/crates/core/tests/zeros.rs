mod oracle;

use std::io::Cursor;

use proptest::prelude::*;
use zeta_deltas::zeros::Violation;
use zeta_deltas::{delta_stream, parse_unchecked, parse_zero_table, validate, window, TableFormat, ZeroError, ZeroWindow};

use oracle::decimal_diff_scaled;

/// Strictly increasing 21-digit literals with nine decimals: an integer
/// part near `10^20` plus increasing nano-unit steps.
fn literals(base: u128, steps: &[u64]) -> Vec<String> {
    let mut units: u128 = 0;
    steps
        .iter()
        .map(|s| {
            units += *s as u128;
            let int = base + units / 1_000_000_000;
            format!("{int}.{:09}", units % 1_000_000_000)
        })
        .collect()
}

fn table_of(lits: &[String]) -> zeta_deltas::ZeroTable {
    parse_zero_table(Cursor::new(lits.join("\n")), TableFormat::Plain).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn high_literal_differences_match_exact_decimal(
        base in 100_000_000_000_000_000_000u128..999_000_000_000_000_000_000u128,
        steps in prop::collection::vec(1u64..4_000_000_000_000, 2..200),
        lag in 1usize..8,
    ) {
        let lits = literals(base, &steps);
        prop_assume!(lit_span(&lits) < 1u128 << 23);
        let t = table_of(&lits);
        let w = ZeroWindow::full(&t).unwrap();
        prop_assume!(lag < lits.len());
        for (i, d) in delta_stream(&w, lag).unwrap().enumerate() {
            let exact = decimal_diff_scaled(&lits[i + lag], &lits[i], 9) as f64 / 1e9;
            prop_assert!((d - exact).abs() <= 2e-9, "{} - {}: {d} vs {exact}", lits[i + lag], lits[i]);
        }
    }

    #[test]
    fn formatting_round_trips_nine_decimals(
        base in 0u128..999_000_000_000_000_000_000u128,
        steps in prop::collection::vec(1u64..100_000_000_000, 1..50),
    ) {
        let lits = literals(base, &steps);
        let t = table_of(&lits);
        for (k, lit) in lits.iter().enumerate() {
            prop_assert_eq!(&t.format_zero(k, 9), lit);
        }
    }

    #[test]
    fn validate_flags_exactly_the_non_increasing_pairs(values in prop::collection::vec(0u32..50, 2..60)) {
        let text: Vec<String> = values.iter().map(|v| format!("{}.5", 100 + v)).collect();
        let t = parse_unchecked(Cursor::new(text.join("\n")), TableFormat::Plain).unwrap();
        let report = validate(&t);
        let expected: Vec<usize> = (1..values.len()).filter(|&i| values[i] <= values[i - 1]).collect();
        let flagged: Vec<usize> = report
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::NotIncreasing { index, .. } => Some(*index),
                _ => None,
            })
            .collect();
        prop_assert_eq!(&flagged, &expected);
        prop_assert_eq!(report.is_clean(), expected.is_empty());
        prop_assert_eq!(parse_zero_table(Cursor::new(text.join("\n")), TableFormat::Plain).is_ok(), expected.is_empty());
    }
}

fn lit_span(lits: &[String]) -> u128 {
    let int = |s: &String| s.split_once('.').unwrap().0.parse::<u128>().unwrap();
    int(lits.last().unwrap()) - int(&lits[0])
}

#[test]
fn headers_and_blank_lines_are_skipped_in_auto_mode() {
    let text = "# zeros\n\n14.134725142\n21.022039639\n# trailing note\n25.010857580\n";
    let t = parse_zero_table(Cursor::new(text), TableFormat::Auto).unwrap();
    assert_eq!(t.len(), 3);
    assert_eq!(t.line(2), 6);
    assert!(matches!(
        parse_zero_table(Cursor::new(text), TableFormat::Plain),
        Err(ZeroError::Parse { line: 1, .. })
    ));
}

#[test]
fn windows_respect_bounds() {
    let t = parse_zero_table(Cursor::new("1.0\n2.0\n3.5\n4.0\n"), TableFormat::Plain).unwrap();
    let w = window(&t, 1, 3).unwrap();
    assert_eq!(w.offsets(), &[1.0, 2.5, 3.0]);
    assert!((w.mean_gap() - 1.0).abs() < 1e-15);
    assert!(matches!(window(&t, 2, 3), Err(ZeroError::Bounds { .. })));
    assert!(matches!(window(&t, 0, 1), Err(ZeroError::WindowTooSmall(..))));
}

#[test]
fn fixture_tables_are_clean() {
    for (name, first, last) in [
        ("zeros_100k.txt", "14.134725141", "74920.827498994"),
        ("zeros_1e6_100k.txt", "600269.677012445", ""),
    ] {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
        let t = parse_zero_table(std::io::BufReader::new(std::fs::File::open(path).unwrap()), TableFormat::Auto).unwrap();
        let report = validate(&t);
        assert!(report.is_clean(), "{name}: {:?}", &report.violations[..report.violations.len().min(3)]);
        assert_eq!(t.len(), 100_000);
        assert_eq!(t.format_zero(0, 9), first);
        if !last.is_empty() {
            assert_eq!(t.format_zero(t.len() - 1, 9), last);
        }
    }
}
