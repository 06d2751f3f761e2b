//! Data-parallel map with a sequential fallback.
//!
//! Sampling experiments, region grids, and the agreement suites are
//! embarrassingly parallel over independent items. With the default
//! `parallel` feature the work fans out over rayon; without it the same
//! entry point runs sequentially. Results are returned in input order either
//! way, so output is deterministic regardless of scheduling.

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential variant, kept callable so benchmarks can compare the
/// two code paths within one build.
pub fn map_sequential<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}
