#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use zeta_deltas::{parse_zero_table, TableFormat, ZeroTable};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// Ordinals 1..=100_000.
pub fn first_100k() -> ZeroTable {
    load("zeros_100k.txt", 1)
}

/// Ordinals 1_000_000..1_100_000.
pub fn from_1e6_100k() -> ZeroTable {
    load("zeros_1e6_100k.txt", 1_000_000)
}

pub fn load(name: &str, first_ordinal: u64) -> ZeroTable {
    let f = File::open(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_zero_table(BufReader::new(f), TableFormat::Auto)
        .unwrap()
        .with_start_ordinal(first_ordinal)
        .with_source(name)
}

/// The lowest zeros, read from the first table.
pub fn reference_zeros(count: usize) -> Vec<f64> {
    let t = first_100k();
    (0..count).map(|k| t.ordinate(k)).collect()
}
