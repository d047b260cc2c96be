use std::ops::Range;

use super::VerifyError;
use crate::graph::Graph;

/// Largest order enumerated without the long-run flag.
pub const MAX_ORDER: usize = 8;
/// Largest order enumerated at all.
pub const MAX_LONG_RUN_ORDER: usize = 9;

/// Fixed number of contiguous code ranges a sweep is split into; independent of
/// the worker count so merged reports do not depend on it.
pub const SHARDS: u64 = 64;

pub fn pair_count(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Number of labelled graphs on `n` vertices, `2^(n(n-1)/2)`.
pub fn code_count(n: usize) -> u64 {
    1u64 << pair_count(n)
}

pub fn check_order(n: usize, long_run: bool) -> Result<(), VerifyError> {
    let limit = if long_run {
        MAX_LONG_RUN_ORDER
    } else {
        MAX_ORDER
    };
    if n > limit {
        return Err(VerifyError::OrderTooLarge { n, limit, long_run });
    }
    Ok(())
}

/// Every labelled graph on `n <= 8` vertices, by increasing edge code (bit `k`
/// is the `k`-th pair in column order), optionally only the connected ones.
pub fn enumerate_graphs(
    n: usize,
    connected_only: bool,
) -> Result<impl Iterator<Item = Graph>, VerifyError> {
    check_order(n, false)?;
    Ok(graphs_in_range(n, 0..code_count(n), connected_only).map(|(_, g)| g))
}

/// As [`enumerate_graphs`], allowing `n = 9`.
pub fn enumerate_graphs_long_run(
    n: usize,
    connected_only: bool,
) -> Result<impl Iterator<Item = Graph>, VerifyError> {
    check_order(n, true)?;
    Ok(graphs_in_range(n, 0..code_count(n), connected_only).map(|(_, g)| g))
}

/// Graphs with edge codes in `codes`, paired with their code.
pub fn graphs_in_range(
    n: usize,
    codes: Range<u64>,
    connected_only: bool,
) -> impl Iterator<Item = (u64, Graph)> {
    codes
        .map(move |c| (c, Graph::from_upper_bits(n, c)))
        .filter(move |(_, g)| !connected_only || g.is_connected())
}

/// The `SHARDS` contiguous pieces of `0..code_count(n)` (fewer for tiny `n`).
pub fn shard_ranges(n: usize) -> Vec<Range<u64>> {
    let total = code_count(n);
    let shards = SHARDS.min(total);
    (0..shards)
        .map(|i| (total * i / shards)..(total * (i + 1) / shards))
        .collect()
}

/// Runs `work` on every shard with `jobs` worker threads and returns the results
/// in shard order.
pub fn run_sharded<T, F>(n: usize, jobs: usize, work: F) -> Result<Vec<T>, VerifyError>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    use rayon::prelude::*;
    let ranges = shard_ranges(n);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    Ok(pool.install(|| ranges.into_par_iter().map(&work).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_graphs(3, false).unwrap().count(), 8);
        assert_eq!(enumerate_graphs(3, true).unwrap().count(), 4);
        assert_eq!(enumerate_graphs(4, false).unwrap().count(), 64);
        assert_eq!(enumerate_graphs(4, true).unwrap().count(), 38);
        assert_eq!(code_count(7), 2_097_152);
        assert!(enumerate_graphs(9, false).is_err());
        assert!(enumerate_graphs_long_run(9, true).is_ok());
        assert!(enumerate_graphs_long_run(10, true).is_err());
    }

    #[test]
    fn shards_cover_codes() {
        for n in 0..8 {
            let r = shard_ranges(n);
            assert_eq!(r.first().unwrap().start, 0);
            assert_eq!(r.last().unwrap().end, code_count(n));
            assert!(r.windows(2).all(|w| w[0].end == w[1].start));
        }
    }
}
