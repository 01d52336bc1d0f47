//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature the map runs on the current rayon pool;
//! without it (or with [`Execution::Sequential`]) it is a plain iterator.
//! Results always come back in input order and are reduced by the caller in
//! that order, so output does not depend on the number of worker threads.

/// Fixed chunk length for splitting index ranges. Part of the determinism
/// contract: changing it changes floating-point rounding of merged moments.
pub const CHUNK_LEN: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Parallel when built with the `parallel` feature, sequential otherwise.
    #[default]
    Parallel,
}

pub(crate) fn map_ordered<T, F>(exec: Execution, items: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..items).into_par_iter().map(f).collect()
        }
        _ => (0..items).map(f).collect(),
    }
}

/// `[start, end)` ranges of at most [`CHUNK_LEN`] covering `0..len`.
pub(crate) fn chunks(len: usize) -> Vec<(usize, usize)> {
    (0..len.div_ceil(CHUNK_LEN))
        .map(|c| (c * CHUNK_LEN, ((c + 1) * CHUNK_LEN).min(len)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_cover() {
        assert!(chunks(0).is_empty());
        let c = chunks(2 * CHUNK_LEN + 3);
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], (2 * CHUNK_LEN, 2 * CHUNK_LEN + 3));
    }

    #[test]
    fn order_is_kept() {
        let v = map_ordered(Execution::Parallel, 1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, x)| *x == 2 * i));
    }
}
