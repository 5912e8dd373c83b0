use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Reproducible sub-streamed randomness: the same (master_seed, stream_id)
/// pair always yields the same byte stream, and distinct stream ids give
/// independent streams (ChaCha's native stream separation).
#[derive(Debug, Clone)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn substream(&self, stream_id: u64) -> Self {
        RngStream::new(self.master_seed, stream_id)
    }
}

impl rand::RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
