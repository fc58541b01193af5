use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::types::{Address, TxHash};

fn digest(seed: u64, kind: &str, domain: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(domain.as_bytes());
    h.update([0]);
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// Independent random stream for one concern. Streams never share state, so drawing more
/// from one leaves every other untouched.
pub fn stream(seed: u64, domain: &str) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(digest(seed, "stream", domain, 0))
}

/// Addresses and hashes are pure functions of (seed, domain, index).
#[derive(Debug, Clone)]
pub struct Ids {
    seed: u64,
}

impl Ids {
    pub fn new(seed: u64) -> Self {
        Ids { seed }
    }

    pub fn address(&self, domain: &str, index: u64) -> Address {
        let d = digest(self.seed, "address", domain, index);
        let mut out = [0u8; 20];
        out.copy_from_slice(&d[12..]);
        // never collide with the mint/burn sentinel
        if out == [0u8; 20] {
            out[19] = 1;
        }
        Address(out)
    }

    pub fn tx(&self, domain: &str, index: u64) -> TxHash {
        TxHash(digest(self.seed, "tx", domain, index))
    }
}
