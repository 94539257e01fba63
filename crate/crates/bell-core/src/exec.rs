//! Batched execution of embarrassingly parallel trial loops.
//!
//! Work is split into fixed-size batches; each batch owns its own RNG
//! substream, so the set of drawn numbers does not depend on how batches
//! are scheduled. Batch results are collected in batch order and reduced
//! sequentially, which makes parallel and sequential runs byte-identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Trials per batch. Part of the reproducibility contract: changing it
/// changes which substream each trial draws from.
pub const BATCH_SIZE: u64 = 1 << 14;

/// How batches are dispatched. `Parallel` degrades to sequential execution
/// when the `parallel` feature is disabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

/// Number of batches covering `n` trials.
pub fn batch_count(n: u64) -> u64 {
    n.div_ceil(BATCH_SIZE)
}

/// Number of trials in batch `batch` out of `n` total.
pub fn batch_len(n: u64, batch: u64) -> u64 {
    let start = batch * BATCH_SIZE;
    BATCH_SIZE.min(n.saturating_sub(start))
}

/// Map `f` over batch indices `0..batches`, preserving batch order.
pub fn map_batches<T, F>(mode: ExecMode, batches: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..batches).map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => (0..batches).into_par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => (0..batches).map(f).collect(),
    }
}
