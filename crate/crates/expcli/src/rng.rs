//! Seeded sampling with a fixed, documented stream.
//!
//! The generator is ChaCha8 keyed with the seed's 8 little-endian bytes
//! followed by 24 zero bytes, stream 0. Integers in `lo..=hi` are drawn by
//! rejection: take `v = next_u64()`, reject while `v >= span * floor(2^64 / span)`,
//! then return `lo + v % span`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PRNG_NAME: &str = "chacha8-le-seed/v1";

pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        SampleRng(ChaCha8Rng::from_seed(key))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        let zone = (1u128 << 64) / span * span;
        loop {
            let v = self.next_u64() as u128;
            if v < zone {
                return (lo as i128 + (v % span) as i128) as i64;
            }
        }
    }

    pub fn vec_i64(&mut self, len: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..len).map(|_| self.range_i64(lo, hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = {
            let mut r = SampleRng::new(7);
            (0..8).map(|_| r.next_u64()).collect()
        };
        let mut r = SampleRng::new(7);
        assert_eq!(a, (0..8).map(|_| r.next_u64()).collect::<Vec<_>>());
        let mut other = SampleRng::new(8);
        assert_ne!(a[0], other.next_u64());
    }

    #[test]
    fn ranges_stay_in_bounds() {
        let mut r = SampleRng::new(1);
        for _ in 0..10_000 {
            let v = r.range_i64(-3, 5);
            assert!((-3..=5).contains(&v));
        }
        assert_eq!(r.range_i64(4, 4), 4);
        let full = r.range_i64(i64::MIN, i64::MAX);
        let _ = full;
    }

    #[test]
    fn first_draws_are_pinned() {
        // regression pin for the documented stream
        let mut r = SampleRng::new(0);
        let got: Vec<i64> = (0..6).map(|_| r.range_i64(1, 50)).collect();
        assert_eq!(got, PINNED);
    }

    const PINNED: [i64; 6] = [29, 6, 27, 31, 7, 28];
}
