//! Data-parallel map layer. With the `parallel` feature (default) the heavy
//! sweeps fan out over a rayon pool; without it everything runs on one
//! thread with identical results, since all randomness is pre-seeded per
//! item and collection preserves order. `seq_map` stays available either way
//! so the benchmark suite can compare both code paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential reference implementation (always available).
pub fn seq_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Order-preserving map over owned items, parallel when enabled.
#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    seq_map(items, f)
}

/// Environment override for the worker pool size.
pub const WORKERS_ENV: &str = "KG_LAB_WORKERS";

/// Size the worker pool: explicit request wins, then the environment
/// variable, then the rayon default. Returns the effective thread count
/// (always 1 without the `parallel` feature).
pub fn init_workers(requested: Option<usize>) -> usize {
    #[cfg(feature = "parallel")]
    {
        let n = requested.or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&n| n > 0)
        });
        if let Some(n) = n {
            // Errors only when a global pool already exists; keep that pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = requested;
        1
    }
}
