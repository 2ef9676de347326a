//! Data-parallel map over index ranges.
//!
//! Certification sweeps are pure maps over grid indices or sample indices
//! followed by a reduction. The map runs on rayon when the `parallel`
//! feature is enabled (the default); reductions are always performed
//! sequentially over the collected buffer, so every metric is bit-identical
//! regardless of partitioning or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting in index order. Parallel when the
/// `parallel` feature is on, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential reference path; always available so benches can compare.
pub fn map_indexed_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Cap the worker pool at `n` threads. Must run before the first sweep;
/// later calls are ignored (rayon's global pool initializes once).
/// Returns false in sequential builds, where the cap is meaningless.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) -> bool {
    false
}

/// Extremes of a slice with first-index tie-breaking.
#[derive(Copy, Clone, Debug)]
pub struct Extremes {
    pub min: f64,
    pub argmin: usize,
    pub max: f64,
    pub argmax: usize,
}

/// Sequential min/max scan; `values` must be non-empty and finite.
pub fn extremes(values: &[f64]) -> Extremes {
    let mut e = Extremes {
        min: values[0],
        argmin: 0,
        max: values[0],
        argmax: 0,
    };
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v < e.min {
            e.min = v;
            e.argmin = k;
        }
        if v > e.max {
            e.max = v;
            e.argmax = k;
        }
    }
    e
}

/// Split a sweep of fallible evaluations: the first error (in index order)
/// wins, mirroring what a sequential run would report.
pub fn first_error<T>(results: Vec<Result<T, crate::Error>>) -> Result<Vec<T>, (usize, crate::Error)> {
    let mut out = Vec::with_capacity(results.len());
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => out.push(v),
            Err(e) => return Err((k, e)),
        }
    }
    Ok(out)
}
