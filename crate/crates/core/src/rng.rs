//! Seeded random streams.
//!
//! Every chain is driven by ChaCha8 keyed from a single 64-bit seed through
//! `seed_from_u64`. Independent consumers use distinct ChaCha stream ids under
//! the same key, so a seed pins every draw on every platform:
//!
//! | stream | consumer                                   |
//! |--------|--------------------------------------------|
//! | 0      | coordinate draws (positions / code labels) |
//! | 1      | symbol draws from the Gibbs conditional    |
//! | 2      | source generation                          |
//! | 3      | channel noise                              |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const POSITION_STREAM: u64 = 0;
pub const SYMBOL_STREAM: u64 = 1;
pub const SOURCE_STREAM: u64 = 2;
pub const CHANNEL_STREAM: u64 = 3;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform index in `0..n` that does not depend on the platform word size.
pub(crate) fn index<R: Rng>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}
