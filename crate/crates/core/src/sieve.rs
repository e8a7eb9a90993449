//! Sieve of Eratosthenes with an on-disk bitset cache.
//!
//! Cache layout: the 5-byte magic `IPSV1`, the limit as a little-endian
//! `u64`, then `ceil((limit + 1) / 8)` bytes where bit `n % 8` of byte
//! `n / 8` is set iff `n` is prime.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 5] = b"IPSV1";
pub const DEFAULT_MAX_LIMIT: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    bits: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A cache file existed but failed validation and was rewritten.
    Rebuilt,
}

fn byte_len(limit: u64) -> usize {
    (limit / 8 + 1) as usize
}

impl PrimeSieve {
    pub fn compute(limit: u64) -> Self {
        let len = byte_len(limit);
        // start with every bit set, then clear composites
        let mut bits = vec![0xffu8; len];
        let clear = |bits: &mut [u8], n: u64| bits[(n / 8) as usize] &= !(1 << (n % 8));
        for n in 0..2.min(limit + 1) {
            clear(&mut bits, n);
        }
        let mut p = 2u64;
        while p * p <= limit {
            if bits[(p / 8) as usize] >> (p % 8) & 1 == 1 {
                let mut m = p * p;
                while m <= limit {
                    clear(&mut bits, m);
                    m += p;
                }
            }
            p += 1;
        }
        // bits past the limit are not part of the sieve
        for n in limit + 1..(len as u64) * 8 {
            clear(&mut bits, n);
        }
        PrimeSieve { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `None` above the sieved limit.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.bits[(n / 8) as usize] >> (n % 8) & 1 == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &b)| {
            (0..8u64)
                .filter(move |j| b >> j & 1 == 1)
                .map(move |j| i as u64 * 8 + j)
        })
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(13 + self.bits.len());
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&self.limit.to_le_bytes());
        out.extend_from_slice(&self.bits);
        out
    }

    /// Parses a cache file's bytes; `None` if the header or length is wrong.
    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let rest = bytes.strip_prefix(CACHE_MAGIC.as_slice())?;
        let (limit_bytes, bits) = rest.split_at_checked(8)?;
        let limit = u64::from_le_bytes(limit_bytes.try_into().ok()?);
        if bits.len() != byte_len(limit) {
            return None;
        }
        Some(PrimeSieve {
            limit,
            bits: bits.to_vec(),
        })
    }

    pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
        dir.join(format!("primes-{limit}.ipsv"))
    }

    /// Loads the sieve for `limit` from `dir`, computing and writing it on a
    /// miss. A cache file whose header does not match is recomputed.
    pub fn load_or_compute(limit: u64, dir: &Path, max_limit: u64) -> Result<(Self, CacheStatus)> {
        if limit > max_limit {
            return Err(Error::GuardExceeded {
                what: "sieve".into(),
                detail: format!("limit {limit} exceeds guard {max_limit}"),
                cost_estimate: limit as f64,
            });
        }
        let path = Self::cache_path(dir, limit);
        let mut status = CacheStatus::Miss;
        if path.exists() {
            let bytes = fs::read(&path)?;
            match PrimeSieve::from_bytes(&bytes) {
                Some(s) if s.limit == limit => return Ok((s, CacheStatus::Hit)),
                _ => status = CacheStatus::Rebuilt,
            }
        }
        let sieve = PrimeSieve::compute(limit);
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&sieve.to_bytes())?;
        tmp.persist(&path).map_err(|e| Error::Io(e.to_string()))?;
        Ok((sieve, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_limits() {
        let s = PrimeSieve::compute(30);
        let ps: Vec<u64> = s.primes().collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(PrimeSieve::compute(1).count(), 0);
        assert_eq!(PrimeSieve::compute(0).count(), 0);
        assert_eq!(PrimeSieve::compute(2).count(), 1);
        assert_eq!(s.is_prime(31), None);
    }

    #[test]
    fn agrees_with_trial_division() {
        let s = PrimeSieve::compute(5000);
        for n in 0..=5000 {
            assert_eq!(s.is_prime(n), Some(trial_division(n)), "n = {n}");
        }
    }

    #[test]
    fn prime_counting_reference_values() {
        assert_eq!(PrimeSieve::compute(100).count(), 25);
        assert_eq!(PrimeSieve::compute(1_000_000).count(), 78_498);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let (a, st) = PrimeSieve::load_or_compute(1000, dir.path(), DEFAULT_MAX_LIMIT).unwrap();
        assert_eq!(st, CacheStatus::Miss);
        let (b, st) = PrimeSieve::load_or_compute(1000, dir.path(), DEFAULT_MAX_LIMIT).unwrap();
        assert_eq!(st, CacheStatus::Hit);
        assert_eq!(a, b);

        let path = PrimeSieve::cache_path(dir.path(), 1000);
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..5], b"IPSV1");
        assert_eq!(u64::from_le_bytes(bytes[5..13].try_into().unwrap()), 1000);

        fs::write(&path, b"IPSV0garbage").unwrap();
        let (c, st) = PrimeSieve::load_or_compute(1000, dir.path(), DEFAULT_MAX_LIMIT).unwrap();
        assert_eq!(st, CacheStatus::Rebuilt);
        assert_eq!(c, a);
    }

    #[test]
    fn guard_rejects_large_limits() {
        let dir = tempfile::tempdir().unwrap();
        let err = PrimeSieve::load_or_compute(1_000, dir.path(), 100).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { .. }));
    }
}
