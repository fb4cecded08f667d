//! Named RNG streams derived from a master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Hash `(master, name)` into a 256-bit ChaCha seed, so adding a new stream
/// never shifts the draws of an existing one.
pub fn stream(master: u64, name: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(name.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}
