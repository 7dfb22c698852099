//! Data-parallel facade: rayon when the `parallel` feature is enabled and
//! more than one job is requested, plain iteration otherwise. Callers pass
//! closures that are `Sync`/`Send` either way so the two paths stay
//! interchangeable at runtime.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of worker threads to use by default.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Map over items, collecting results in input order.
pub fn map_collect<T, U, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            return pool.install(|| items.into_par_iter().map(&f).collect());
        }
    }
    let _ = jobs;
    items.into_iter().map(f).collect()
}

/// Map over an index range, collecting results in order.
pub fn map_range<U, F>(n: usize, jobs: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_collect((0..n).collect(), jobs, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let seq = map_range(100, 1, |i| i * i);
        let par = map_range(100, 4, |i| i * i);
        assert_eq!(seq, par);
    }
}
