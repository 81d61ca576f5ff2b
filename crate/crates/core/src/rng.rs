//! Seeded, labelled random streams.
//!
//! Every randomized operation in this crate draws from a ChaCha stream
//! derived from `(seed, label)`. Labels name the module, the call site and
//! the resample attempt, so a whole pipeline is a deterministic function of
//! one seed while resampling loops stay independent of each other.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a deterministic sub-stream from a base seed and a label.
pub fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}
