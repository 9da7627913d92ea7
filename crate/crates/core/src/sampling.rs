//! Seeded sampling shared by the certificate checker and the oracle sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Blocks with more rows than this are sampled instead of enumerated.
pub const DEFAULT_MAX_ROWS: u64 = 1_000_000;

/// Rows drawn per oversized block.
pub const DEFAULT_SAMPLE_ROWS: u64 = 100_000;

/// Environment override for [`DEFAULT_MAX_ROWS`].
pub const MAX_ROWS_ENV: &str = "NEIGHBORLY_MAX_ROWS";

/// Positive integer set in `NEIGHBORLY_MAX_ROWS`, if any.
pub fn env_cap() -> Option<u64> {
    std::env::var(MAX_ROWS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&v| v > 0)
}

/// Row cap from `NEIGHBORLY_MAX_ROWS`, falling back to the default when the
/// variable is unset or not a positive integer.
pub fn max_rows_from_env() -> u64 {
    env_cap().unwrap_or(DEFAULT_MAX_ROWS)
}

/// Independent generator for `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `count` indices drawn uniformly (with replacement) from `0..len`.
pub fn sample_indices(seed: u64, stream: u64, len: u64, count: u64) -> Vec<u64> {
    if len == 0 {
        return Vec::new();
    }
    let mut rng = rng_for(seed, stream);
    (0..count).map(|_| rng.random_range(0..len)).collect()
}

const CHUNK: usize = 2048;

/// Map `f` over `0..total` in parallel chunks and feed the results to `sink`
/// in index order, so the outcome does not depend on the thread count.
pub(crate) fn ordered_par_map<T, E, F, S>(total: u64, f: F, mut sink: S) -> Result<(), E>
where
    T: Send,
    E: Send + From<CountOverflow>,
    F: Fn(u64) -> Result<T, E> + Sync,
    S: FnMut(u64, T),
{
    let total = usize::try_from(total).map_err(|_| E::from(CountOverflow))?;
    let mut start = 0usize;
    while start < total {
        let end = (start + CHUNK).min(total);
        let items = (start..end)
            .into_par_iter()
            .map(|i| f(i as u64))
            .collect::<Result<Vec<T>, E>>()?;
        for (offset, item) in items.into_iter().enumerate() {
            sink((start + offset) as u64, item);
        }
        start = end;
    }
    Ok(())
}

/// A sweep length that does not fit in `usize`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CountOverflow;
