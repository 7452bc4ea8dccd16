//! Execution strategy for the data-parallel inner loops.
//!
//! Per-sample quantity evaluation, residual scans and verification sweeps
//! are embarrassingly parallel. With the `parallel` feature (default) they
//! fan out through rayon; without it every helper falls back to the
//! sequential path. The `*_seq` variants are always available so the bench
//! suite can compare both strategies in a single run.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_seq(items, f)
}

/// Sequential reference implementation of [`map`].
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Fallible map; the first error wins.
#[cfg(feature = "parallel")]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Fallible map; the first error wins.
#[cfg(not(feature = "parallel"))]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    try_map_seq(items, f)
}

/// Sequential reference implementation of [`try_map`].
pub fn try_map_seq<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    items.iter().map(f).collect()
}

/// Maximum of `f` over `items` (`-inf` when empty).
#[cfg(feature = "parallel")]
pub fn max_of<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    items
        .par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Maximum of `f` over `items` (`-inf` when empty).
#[cfg(not(feature = "parallel"))]
pub fn max_of<T, F>(items: &[T], f: F) -> f64
where
    F: Fn(&T) -> f64,
{
    max_of_seq(items, f)
}

/// Sequential reference implementation of [`max_of`].
pub fn max_of_seq<T, F>(items: &[T], f: F) -> f64
where
    F: Fn(&T) -> f64,
{
    items.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
}
