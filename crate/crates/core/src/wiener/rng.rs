use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type handed out by [`RngStream`].
pub type StreamRng = ChaCha8Rng;

/// Chunks are `2^40` words apart inside one ChaCha stream.
const CHUNK_SHIFT: u32 = 40;

/// Reproducible random stream identified by `(seed, stream)`.
///
/// The seed keys a ChaCha8 generator and the stream id selects its 64-bit
/// stream, so distinct ids never overlap. [`RngStream::chunk`] positions the
/// generator at a fixed word offset, which lets Monte Carlo loops hand disjoint
/// sub-sequences to worker threads deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Generator positioned at the start of the stream.
    pub fn rng(&self) -> StreamRng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }

    /// Generator positioned at the start of chunk `index`.
    pub fn chunk(&self, index: u64) -> StreamRng {
        let mut r = self.rng();
        r.set_word_pos((index as u128) << CHUNK_SHIFT);
        r
    }

    /// A different stream under the same seed, derived from `(stream, id)`.
    pub fn derive(&self, id: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(id.wrapping_add(0x9E37_79B9_7F4A_7C15))),
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
