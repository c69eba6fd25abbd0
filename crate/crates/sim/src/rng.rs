//! Random stream layout.
//!
//! Every draw comes from `ChaCha20Rng::seed_from_u64(seed)` with a stream id:
//! trial `i` at sweep point `p` uses stream `(p << 32) | i`, and pilot design
//! for cell `t` uses `DESIGN_STREAM | t`. Results therefore depend only on the
//! seed, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const DESIGN_STREAM: u64 = 1 << 63;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha20Rng {
    debug_assert!(point < 1 << 31 && trial < 1 << 32);
    stream_rng(seed, ((point as u64) << 32) | trial as u64)
}

pub fn design_rng(seed: u64, cell: usize) -> ChaCha20Rng {
    stream_rng(seed, DESIGN_STREAM | cell as u64)
}
