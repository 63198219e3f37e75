use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible random stream addressed by `(root_seed, stream_id)`.
///
/// Streams of one root share a ChaCha key and differ in the stream
/// parameter, so distinct ids give non-overlapping keystreams.
#[derive(Clone, Debug)]
pub struct RngStream {
    root_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(root_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(root_seed);
        inner.set_stream(stream_id);
        Self {
            root_seed,
            stream_id,
            inner,
        }
    }

    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Root seed of a sub-computation, mixed from a parent seed and tags such
/// as a series label hash and a sweep index.
pub fn derive_seed(root: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(root), |acc, t| splitmix64(acc ^ splitmix64(*t)))
}
