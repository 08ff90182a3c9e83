//! Sweep execution, rayon-backed when the `parallel` feature is enabled.
//!
//! Both paths return results in index order, and the first-match search
//! returns the lowest admissible index regardless of scheduling, so output
//! never depends on which path ran.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..count`, collecting in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<R: Send>(count: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<R>(count: usize, f: impl Fn(usize) -> R) -> Vec<R> {
    (0..count).map(f).collect()
}

/// Sequential version, kept unconditionally for benchmarking against the
/// parallel path.
pub(crate) fn map_indexed_seq<R>(count: usize, f: impl Fn(usize) -> R) -> Vec<R> {
    (0..count).map(f).collect()
}

/// First `Some` produced over `0..count`, by index order.
#[cfg(feature = "parallel")]
pub(crate) fn find_first_indexed<R: Send>(
    count: usize,
    f: impl Fn(usize) -> Option<R> + Sync + Send,
) -> Option<R> {
    (0..count).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first_indexed<R>(count: usize, f: impl Fn(usize) -> Option<R>) -> Option<R> {
    (0..count).find_map(f)
}

pub(crate) fn find_first_indexed_seq<R>(
    count: usize,
    f: impl Fn(usize) -> Option<R>,
) -> Option<R> {
    (0..count).find_map(f)
}
