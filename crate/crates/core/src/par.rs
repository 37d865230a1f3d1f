//! Execution policy for the grid scans and Monte-Carlo sweeps.
//!
//! Every kernel that fans out over independent work items goes through [`map_indexed`] or
//! [`map_chunks`]. Both return results in index order, and all reductions downstream are done
//! sequentially over that ordered output, so a scan produces the same bits whether it ran on
//! one thread or sixty-four. Without the `parallel` feature, [`Exec::Parallel`] silently runs
//! sequentially.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluates `f(0), …, f(n-1)` and returns them in index order.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Splits `0..n` into contiguous chunks of `chunk` items and maps each chunk range.
///
/// Chunk boundaries depend only on `n` and `chunk`, never on the thread count.
pub fn map_chunks<T, F>(exec: Exec, n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk);
    map_indexed(exec, count, |c| {
        let start = c * chunk;
        f(c, start..(start + chunk).min(n))
    })
}

/// Independent random stream `stream` of the generator seeded by `seed`.
///
/// Monte-Carlo sweeps draw sample `i` from stream `i` (or chunk `i`), so the sample set
/// does not depend on how work is scheduled.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Index of the largest value; ties go to the smallest index. NaN entries are skipped.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if values[b] >= v => {}
            _ => best = Some(i),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results_match_across_policies() {
        let f = |i: usize| ((i as f64) * 0.37).sin();
        let a = map_indexed(Exec::Sequential, 1000, f);
        let b = map_indexed(Exec::Parallel, 1000, f);
        assert_eq!(a, b);
    }

    #[test]
    fn chunks_cover_range() {
        let parts = map_chunks(Exec::Parallel, 10, 3, |_, r| r);
        assert_eq!(parts, vec![0..3, 3..6, 6..9, 9..10]);
    }

    #[test]
    fn argmax_ties_to_smallest_index() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax(&[f64::NAN, 0.5]), Some(1));
        assert_eq!(argmax(&[]), None);
    }
}
