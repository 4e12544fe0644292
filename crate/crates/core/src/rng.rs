//! Reproducible random streams.
//!
//! A stream is identified by a master seed and a stream index. The master
//! seed keys a ChaCha generator and the index selects its stream counter, so
//! every (seed, index) pair maps to an independent, bit-reproducible
//! sequence no matter which worker consumes it.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Stream `offset` positions after this one, sharing the master seed.
    pub fn substream(&self, offset: u64) -> Self {
        Self::new(self.master_seed, self.stream_index.wrapping_add(offset))
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}
