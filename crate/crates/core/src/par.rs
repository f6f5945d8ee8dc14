//! Data-parallel helpers. With the `parallel` feature the work is spread
//! over rayon's pool; without it the same closures run sequentially. Both
//! paths return results in index order, so downstream folds are identical.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Seeded source of independent random streams, one per replicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// Generator for replicate `i`; the same `(seed, i)` always yields the
    /// same stream, independent of scheduling.
    pub fn stream(&self, i: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i);
        rng
    }

    /// Derived source for a named sub-experiment.
    pub fn split(&self, tag: u64) -> RandomSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        rng.set_stream(tag);
        use rand::RngCore;
        RandomSource { seed: rng.next_u64() }
    }
}

/// Runs `f(rng_i, i)` for `i in 0..n` and collects the results in order.
pub fn replicate<T, F>(source: &RandomSource, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync + Send,
{
    let run = |i: usize| {
        let mut rng = source.stream(i as u64);
        f(&mut rng, i)
    };
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(run).collect()
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
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

/// Order-preserving map over `0..n`.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sums per-chunk partial vectors in a fixed order. `f(range)` returns the
/// partial sums over one chunk of `0..n`; chunks are `chunk` long.
pub fn chunked_sum<F>(n: usize, chunk: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(std::ops::Range<usize>) -> Vec<f64> + Sync + Send,
{
    let chunks = n.div_ceil(chunk.max(1));
    let partials = map_range(chunks, |c| {
        let lo = c * chunk;
        f(lo..(lo + chunk).min(n))
    });
    let mut acc = vec![0.0; width];
    for p in partials {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    acc
}

/// Installs a global pool with `threads` workers; a no-op without the
/// `parallel` feature or when a pool already exists.
pub fn init_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
    }
}
