//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature, work runs on rayon: `workers == 0` uses the
//! global pool, `workers == 1` stays on the calling thread, anything else
//! gets a dedicated pool of that size. Without the feature everything is
//! sequential and `workers` is ignored.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Fold `f` over `range` and combine partial results with `merge`. `merge`
/// must be associative and commutative for the result to be independent of
/// the worker count.
pub fn fold_range<R, I, F, M>(range: Range<u64>, workers: usize, identity: I, f: F, merge: M) -> R
where
    R: Send,
    I: Fn() -> R + Send + Sync,
    F: Fn(R, u64) -> R + Send + Sync,
    M: Fn(R, R) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        let run = || range.clone().into_par_iter().fold(&identity, &f).reduce(&identity, &merge);
        return with_workers(workers, run);
    }
    let _ = (workers, &merge);
    range.fold(identity(), f)
}

/// Map `f` over `items`, preserving order.
pub fn map_slice<T, U, F>(items: &[T], workers: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        return with_workers(workers, || items.par_iter().map(&f).collect());
    }
    let _ = workers;
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn with_workers<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return op();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

/// Whether this build can run work in parallel.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_is_worker_independent() {
        let sum = |w| fold_range(0..10_000, w, || 0u64, |acc, i| acc + i * i, |a, b| a + b);
        let expected: u64 = (0..10_000u64).map(|i| i * i).sum();
        for w in [0, 1, 2, 5] {
            assert_eq!(sum(w), expected);
        }
    }

    #[test]
    fn map_keeps_order() {
        let v: Vec<u32> = (0..1000).collect();
        for w in [0, 1, 3] {
            assert_eq!(map_slice(&v, w, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }
}
