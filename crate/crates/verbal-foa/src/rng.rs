//! SplitMix64 pseudo-random number generator.
//!
//! The synthetic-demonstration generator must produce bit-identical output
//! for a given seed on every platform, so it uses this fixed recurrence
//! (Vigna's SplitMix64 with the standard published constants) instead of a
//! generator whose stream could change across library versions.

/// Additive constant of the SplitMix64 state update (the golden gamma).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

/// Advances `state` by one step and returns the new state together with a
/// uniformly distributed 64-bit output.
pub fn rng_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(GAMMA);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(MIX1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX2);
    (state, z ^ (z >> 31))
}

/// SplitMix64 stream seeded with a 64-bit value.
#[derive(Clone, Copy, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        let (state, out) = rng_next(self.state);
        self.state = state;
        out
    }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 / DEN
    }

    /// Uniform draw in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Derives an independent child stream. Child `k` depends only on the
    /// parent seed and `k`, so adding more children never perturbs the
    /// streams of existing ones.
    pub fn child(seed: u64, k: u64) -> SplitMix64 {
        let mut seeder = SplitMix64::new(seed);
        let mut child_seed = 0u64;
        for _ in 0..=k {
            child_seed = seeder.next_u64();
        }
        SplitMix64::new(child_seed)
    }
}
