//! Seeded, splittable random streams.
//!
//! All randomness derives from a single 64-bit root seed through ChaCha8,
//! a counter-based generator with 2^64 independent streams. A stream is
//! addressed by `(slot, batch)`: the slot separates experiment roles (the
//! four measurement contexts, the shared sample, the spin-1 run), the
//! batch separates chunks of work inside one role. The derivation is
//!
//! ```text
//! stream_id = (slot as u64) << 32 | batch
//! rng       = ChaCha8 seeded from root_seed, positioned on stream_id
//! ```
//!
//! and uniform doubles take the top 53 bits of each 64-bit output:
//! `(word >> 11) * 2^-53`, giving values in `[0, 1)`. Reproducing a run
//! therefore needs only the root seed, the slot/batch layout, and the
//! fixed number of draws per trial.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream slots for the four CHSH contexts, in report order
/// (a,b), (a,b'), (a',b), (a',b').
pub const SLOT_CONTEXTS: [u32; 4] = [0, 1, 2, 3];
/// Stream slot for the shared hidden-variable sample.
pub const SLOT_SHARED: u32 = 4;
/// Stream slot for the spin-1 agreement simulation.
pub const SLOT_SPIN1: u32 = 5;
/// Scratch slot for tests and ad hoc sampling.
pub const SLOT_SCRATCH: u32 = 6;

const F64_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Root seed plus the substream derivation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamPlan {
    root_seed: u64,
}

impl StreamPlan {
    pub fn new(root_seed: u64) -> Self {
        Self { root_seed }
    }

    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    /// The stream for `(slot, batch)`.
    pub fn stream(&self, slot: u32, batch: u64) -> StateStream {
        debug_assert!(batch < 1 << 32, "batch index exceeds the stream layout");
        let stream_id = (u64::from(slot) << 32) | batch;
        let mut rng = ChaCha8Rng::seed_from_u64(self.root_seed);
        rng.set_stream(stream_id);
        StateStream {
            rng,
            stream_id,
            drawn: 0,
        }
    }
}

/// One exclusively-owned random stream. Tracks how many physical states
/// have been drawn from it so each state gets a unique `(stream, index)`
/// identity tag.
#[derive(Debug, Clone)]
pub struct StateStream {
    rng: ChaCha8Rng,
    stream_id: u64,
    drawn: u64,
}

impl StateStream {
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform in `[0, 1)` from the top 53 bits of one ChaCha word pair.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * F64_SCALE
    }

    /// Draw counter for state identity tags; increments on every call.
    pub fn next_state_index(&mut self) -> u64 {
        let index = self.drawn;
        self.drawn += 1;
        index
    }
}
