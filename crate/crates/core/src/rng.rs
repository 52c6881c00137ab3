//! Portable deterministic PRNG.
//!
//! SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter advanced by the
//! golden-ratio increment and passed through a fixed finalizer. Every stream
//! in the crate is derived as `SplitMix64::stream(seed, index)`, which makes
//! banks, noise and synthetic data reproducible across platforms and across
//! implementations that follow the same three formulas below.
//!
//! Stream indices below [`DATASET_STREAMS`] belong to pooler columns; dataset
//! generators use `DATASET_STREAMS + k`.

/// First stream index reserved for dataset generation.
pub const DATASET_STREAMS: u64 = 1 << 32;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream `index` of `seed`: state = mix(seed) ^ mix(index + 1).
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(mix(seed) ^ mix(index.wrapping_add(1)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform on `[0, 1)` with 24 bits of resolution: `(x >> 40) / 2^24`.
    /// Exactly representable in both `f32` and `f64`, so circuits of either
    /// precision draw identical values.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 40) as f64 * (1.0 / (1u64 << 24) as f64)
    }

    /// Uniform integer in `[0, bound)`; `bound` must be non-zero.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Lemire's multiply-shift; the bias is below 2^-32 for the sizes used here.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn unit_range() {
        let mut rng = SplitMix64::stream(42, 0);
        for _ in 0..10_000 {
            let u = rng.next_unit();
            assert!((0.0..1.0).contains(&u));
            assert!((u as f32) < 1.0);
        }
    }

    #[test]
    fn streams_differ() {
        let a = SplitMix64::stream(42, 0).next_u64();
        let b = SplitMix64::stream(42, 1).next_u64();
        let c = SplitMix64::stream(43, 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn below_in_range() {
        let mut rng = SplitMix64::new(7);
        for bound in 1..50 {
            assert!(rng.below(bound) < bound);
        }
    }
}
