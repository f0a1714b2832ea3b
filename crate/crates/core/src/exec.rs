//! Execution strategy for the exhaustive loops.

use std::ops::Range;

/// How index ranges are processed.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    /// One thread, ranges in order.
    Sequential,
    /// Rayon's global pool. Falls back to sequential when built without the
    /// `parallel` feature.
    #[default]
    Parallel,
    /// Rayon on a dedicated pool with this many threads.
    Threads(usize),
}

impl Exec {
    /// `PERMUPOLY_THREADS` if set (1 means sequential), otherwise the
    /// default parallel mode.
    pub fn from_env() -> Self {
        match std::env::var("PERMUPOLY_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            Some(0) | None => Exec::Parallel,
            Some(1) => Exec::Sequential,
            Some(n) => Exec::Threads(n),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Exec::Sequential
    }
}

fn chunks(len: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> {
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    (0..count).map(move |i| i * chunk..((i + 1) * chunk).min(len))
}

/// Maps every `chunk`-sized subrange of `0..len` and folds the partial
/// results left to right. `merge` must be associative; the result does not
/// depend on the execution mode.
pub fn map_reduce<A, M, R>(exec: Exec, len: u64, chunk: u64, identity: A, map: M, merge: R) -> A
where
    A: Send + Sync + Clone,
    M: Fn(Range<u64>) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || {
            let ranges: Vec<Range<u64>> = chunks(len, chunk).collect();
            ranges
                .into_par_iter()
                .map(&map)
                .reduce(|| identity.clone(), &merge)
        };
        match exec {
            Exec::Sequential => {}
            Exec::Parallel => return run(),
            Exec::Threads(n) => {
                if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    return pool.install(run);
                }
            }
        }
    }
    let _ = exec;
    chunks(len, chunk).map(&map).fold(identity, &merge)
}

/// Writes `f(i)` into `out[i]` for every index.
pub fn fill<T, F>(exec: Exec, out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = |out: &mut [T]| {
            out.par_chunks_mut(chunk.max(1))
                .enumerate()
                .for_each(|(c, slot)| {
                    let base = c * chunk.max(1);
                    for (i, v) in slot.iter_mut().enumerate() {
                        *v = f(base + i);
                    }
                })
        };
        match exec {
            Exec::Sequential => {}
            Exec::Parallel => return run(out),
            Exec::Threads(n) => {
                if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    return pool.install(|| run(out));
                }
            }
        }
    }
    let _ = (exec, chunk);
    for (i, v) in out.iter_mut().enumerate() {
        *v = f(i);
    }
}
