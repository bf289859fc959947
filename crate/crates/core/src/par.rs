//! Deterministic data-parallel helpers.
//!
//! Work is split into fixed-size chunks whose boundaries depend only on the
//! problem size. Each chunk is reduced sequentially and the chunk partials are
//! combined left to right, so the parallel and sequential builds produce the
//! same bits regardless of the thread count.

/// Chunk length used for every reduction in the crate.
pub const CHUNK: usize = 256;

/// Evaluates `f(i)` for `i in 0..n` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sums `f(i)` over `0..n` with fixed chunk boundaries.
pub fn chunked_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partials = map_indexed(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        acc
    });
    partials.iter().sum()
}

/// Sequential pairwise-blocked sum of a slice, with the same chunk boundaries
/// as [`chunked_sum`].
pub fn fixed_sum(values: &[f64]) -> f64 {
    values
        .chunks(CHUNK)
        .map(|c| c.iter().sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum()
}
