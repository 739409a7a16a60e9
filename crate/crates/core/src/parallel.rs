//! Worker-count control. `QDESIGN_THREADS` caps the number of rayon workers;
//! every parallel routine merges results in input order, so outputs do not
//! depend on the worker count.

use rayon::ThreadPool;

pub const THREADS_ENV: &str = "QDESIGN_THREADS";

pub fn worker_count() -> usize {
    let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(hw)
}

pub fn pool() -> ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .expect("thread pool construction")
}

/// Runs `f` inside a pool sized by [`worker_count`].
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}
