//! Worker-count independent Monte Carlo scheduling.
//!
//! The sample space is cut into fixed chunks of [`CHUNK_SAMPLES`] draws.
//! Every chunk owns a ChaCha substream keyed by (seed, experiment tag,
//! chunk index), and the per-chunk hit counts are combined with u64
//! addition, so the total depends only on the seed, the tag and the
//! sample count, never on how chunks are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Draws per scheduling chunk.
pub const CHUNK_SAMPLES: u64 = 1 << 16;

/// The random stream of one chunk of one experiment.
pub fn substream(seed: u64, tag: u64, chunk: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    key[16..24].copy_from_slice(&chunk.to_le_bytes());
    key[24..].copy_from_slice(b"snowlab1");
    ChaCha8Rng::from_seed(key)
}

/// Counts predicate hits over `samples` draws, split across `workers`
/// threads (0 or 1 means the calling thread only).
pub fn mc_count<F>(seed: u64, tag: u64, samples: u64, workers: usize, hit: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    let count_chunk = |chunk: u64| -> u64 {
        let mut rng = substream(seed, tag, chunk);
        let already = chunk * CHUNK_SAMPLES;
        let n = CHUNK_SAMPLES.min(samples - already);
        (0..n).filter(|_| hit(&mut rng)).count() as u64
    };
    if workers <= 1 {
        (0..chunks).map(count_chunk).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        pool.install(|| (0..chunks).into_par_iter().map(count_chunk).sum())
    }
}
