//! Seed derivation for reproducible, order-independent parallel runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Random stream used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Mixes `(master_seed, replicate_index, stream_tag)` through SHA-256 and
/// keeps the first 8 bytes. Distinct tags give independent streams for the
/// graph, the assignment, the noise and the null sampler of one replicate.
pub fn derive_replicate_seed(master_seed: u64, replicate_index: u64, stream_tag: &str) -> u64 {
    let digest = Sha256::new()
        .chain_update(b"netperm/v1")
        .chain_update(master_seed.to_le_bytes())
        .chain_update(replicate_index.to_le_bytes())
        .chain_update((stream_tag.len() as u64).to_le_bytes())
        .chain_update(stream_tag.as_bytes())
        .finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

pub fn stream(master_seed: u64, replicate_index: u64, stream_tag: &str) -> StreamRng {
    StreamRng::seed_from_u64(derive_replicate_seed(master_seed, replicate_index, stream_tag))
}

/// Where a random stream came from, recorded alongside results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedInfo {
    pub master_seed: u64,
    pub replicate: u64,
    pub stream: String,
    pub derived_seed: u64,
}

impl SeedInfo {
    pub fn new(master_seed: u64, replicate: u64, stream: &str) -> Self {
        SeedInfo {
            master_seed,
            replicate,
            stream: stream.to_owned(),
            derived_seed: derive_replicate_seed(master_seed, replicate, stream),
        }
    }

    pub fn rng(&self) -> StreamRng {
        StreamRng::seed_from_u64(self.derived_seed)
    }
}
