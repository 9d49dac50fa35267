//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the helpers dispatch to rayon;
//! without it they run plain iterators. Results are identical either way:
//! every mapped item is pure and aggregation order is fixed by the caller.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving input order in the output.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs `job` on a pool with `threads` workers (0 = default size).
/// Without the `parallel` feature the job just runs on the current thread.
pub fn run_with_threads<R: Send>(threads: usize, job: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if threads > 0 {
            builder = builder.num_threads(threads);
        }
        match builder.build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        job()
    }
}

/// Thread count requested through the `CKNLAB_THREADS` environment variable,
/// falling back to `configured` when unset or unparsable.
pub fn env_threads(configured: usize) -> usize {
    match std::env::var("CKNLAB_THREADS") {
        Ok(v) => v.trim().parse().unwrap_or(configured),
        Err(_) => configured,
    }
}
