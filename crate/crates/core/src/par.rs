//! Thin wrapper over the optional data-parallel backend.
//!
//! With the `parallel` feature (on by default) the helpers fan work out over
//! rayon; without it they run sequentially with identical results. All callers
//! consume results in input order, so the feature only changes wall-clock
//! time, never output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Installs a global thread pool of the given size. A no-op without the
/// `parallel` feature. Returns an error string if the pool was already built.
#[cfg(feature = "parallel")]
pub fn set_thread_count(threads: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn set_thread_count(_threads: usize) -> std::result::Result<(), String> {
    Ok(())
}

/// Maps `f` over the slice, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_range<U: Send>(range: std::ops::Range<usize>, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U>(range: std::ops::Range<usize>, f: impl Fn(usize) -> U) -> Vec<U> {
    range.map(f).collect()
}
