//! Worker-count aware mapping over independent work items.
//!
//! With the `parallel` feature (default) and more than one job, items run on a
//! dedicated rayon pool of exactly `jobs` threads. Otherwise, or when the
//! feature is disabled, the same closure runs sequentially. Output order always
//! matches input order, so results never depend on the worker count.

use std::num::NonZeroUsize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exec {
    jobs: NonZeroUsize,
}

impl Exec {
    pub fn sequential() -> Self {
        Exec {
            jobs: NonZeroUsize::MIN,
        }
    }

    /// `jobs == 0` is treated as 1.
    pub fn with_jobs(jobs: usize) -> Self {
        Exec {
            jobs: NonZeroUsize::new(jobs).unwrap_or(NonZeroUsize::MIN),
        }
    }

    /// One job per available core.
    pub fn available() -> Self {
        Exec {
            jobs: std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs.get()
    }

    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && self.jobs.get() > 1
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs.get())
                .build()
            {
                Ok(pool) => return pool.install(|| items.par_iter().map(&f).collect()),
                Err(err) => log::warn!("falling back to sequential execution: {err}"),
            }
        }
        items.iter().map(f).collect()
    }
}

impl Default for Exec {
    fn default() -> Self {
        Exec::available()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_job_count() {
        let items: Vec<u64> = (0..200).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        for jobs in [0, 1, 2, 7] {
            assert_eq!(Exec::with_jobs(jobs).map(&items, |x| x * x), expected);
        }
    }

    #[test]
    fn zero_jobs_means_one() {
        assert_eq!(Exec::with_jobs(0).jobs(), 1);
        assert!(!Exec::sequential().is_parallel());
    }
}
