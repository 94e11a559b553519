//! Deterministic seed plumbing.
//!
//! Everything in the engine that needs randomness routes through these
//! helpers so that a run is a pure function of its seed. Tag draws are
//! *stateless*: the value depends only on the seed and the subinterval
//! bits, never on evaluation order, which keeps parallel and sequential
//! partition builds bit-identical.

/// One step of the splitmix64 generator.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a salt.
///
/// Used to hand independent streams to replicates, gauge indices and
/// harness cases without sharing mutable state.
#[inline]
pub fn derive(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(salt.wrapping_mul(0xA076_1D64_78BD_642F)))
}

/// Maps a u64 to a float in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    // Top 53 bits give a uniform dyadic rational in [0, 1).
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stateless uniform draw in `[0, 1)` keyed by a seed and the bit patterns
/// of the current subinterval.
#[inline]
pub fn unit_for_subinterval(seed: u64, left: f64, right: f64) -> f64 {
    let mixed = splitmix64(seed ^ splitmix64(left.to_bits()) ^ splitmix64(right.to_bits().rotate_left(17)));
    unit_f64(mixed)
}

/// A small deterministic stream for places where a sequence of draws is
/// more natural than keyed hashing (sample points, case scalars).
#[derive(Debug, Clone)]
pub struct SeedStream {
    state: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self {
            state: splitmix64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = splitmix64(self.state);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_unit() * (hi - lo)
    }
}
