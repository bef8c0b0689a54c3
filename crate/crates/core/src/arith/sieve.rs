//! Segmented sieve producing exact prime-power codes.

use std::path::PathBuf;

use crate::error::{Error, Result};

pub const DEFAULT_SEGMENT_LENGTH: usize = 1 << 20;
pub const MIN_SEGMENT_LENGTH: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_length: usize,
    /// Directory holding PKML segment files; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_length: DEFAULT_SEGMENT_LENGTH,
            cache_dir: None,
        }
    }
}

impl SieveConfig {
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.segment_length < MIN_SEGMENT_LENGTH {
            return Err(Error::Parameter(format!(
                "segment length {} is below the minimum {MIN_SEGMENT_LENGTH}",
                self.segment_length
            )));
        }
        Ok(())
    }
}

/// A block of consecutive integers `base, base+1, …` with their prime-power codes.
///
/// `codes[i]` is `p` when `base + i = p^j` for some `j >= 1`, otherwise 0.
/// Λ is always recomputed from the stored prime, never stored as a float.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    base: u64,
    codes: Vec<u32>,
}

impl Segment {
    pub(crate) fn from_parts(base: u64, codes: Vec<u32>) -> Self {
        Self { base, codes }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// One past the last integer covered.
    pub fn end(&self) -> u64 {
        self.base + self.codes.len() as u64
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub(crate) fn into_codes(self) -> Vec<u32> {
        self.codes
    }

    pub fn code(&self, n: u64) -> Option<u32> {
        n.checked_sub(self.base)
            .and_then(|i| self.codes.get(i as usize).copied())
    }

    pub fn lambda(&self, n: u64) -> Option<f64> {
        self.code(n).map(lambda_of_code)
    }
}

#[inline]
pub fn lambda_of_code(code: u32) -> f64 {
    if code == 0 {
        0.0
    } else {
        f64::from(code).ln()
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// All primes `<= limit` by a plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u32> {
    assert!(
        limit <= u64::from(u32::MAX),
        "prime table limited to 32-bit primes"
    );
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::with_capacity(limit / 10 + 16);
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Base primes needed to sieve every integer below `end`.
pub(crate) fn base_primes_for(end: u64) -> Vec<u32> {
    small_primes(isqrt(end.saturating_sub(1)))
}

pub fn sieve_segment(base: u64, length: usize) -> Result<Segment> {
    let end = check_range(base, length)?;
    sieve_segment_with(base, length, &base_primes_for(end))
}

fn check_range(base: u64, length: usize) -> Result<u64> {
    if length == 0 {
        return Err(Error::EmptyRange);
    }
    if base == 0 {
        return Err(Error::Domain("segments start at n >= 1".into()));
    }
    base.checked_add(length as u64)
        .ok_or_else(|| Error::Parameter("segment end overflows 64 bits".into()))
}

/// Sieves `[base, base+length)` given every prime up to `sqrt(base+length-1)`.
///
/// Each composite receives its smallest prime factor; prime powers are then
/// recognised by dividing out that factor.
pub(crate) fn sieve_segment_with(base: u64, length: usize, primes: &[u32]) -> Result<Segment> {
    let end = check_range(base, length)?;
    let mut spf = vec![0u32; length];
    for &p in primes {
        let p64 = u64::from(p);
        let sq = p64 * p64;
        if sq >= end {
            break;
        }
        let first = sq.max(base.div_ceil(p64) * p64);
        let mut m = first;
        while m < end {
            let slot = &mut spf[(m - base) as usize];
            if *slot == 0 {
                *slot = p;
            }
            m += p64;
        }
    }
    let mut codes = vec![0u32; length];
    for (i, (&p, code)) in spf.iter().zip(codes.iter_mut()).enumerate() {
        let n = base + i as u64;
        if n == 1 {
            continue;
        }
        if p == 0 {
            *code = u32::try_from(n)
                .map_err(|_| Error::Parameter(format!("prime {n} does not fit in 32 bits")))?;
        } else {
            let p64 = u64::from(p);
            let mut r = n / p64;
            while r.is_multiple_of(p64) {
                r /= p64;
            }
            if r == 1 {
                *code = p;
            }
        }
    }
    Ok(Segment { base, codes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_code(n: u64) -> u32 {
        if n < 2 {
            return 0;
        }
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                let mut r = n;
                while r.is_multiple_of(p) {
                    r /= p;
                }
                return if r == 1 { p as u32 } else { 0 };
            }
            p += 1;
        }
        n as u32
    }

    #[test]
    fn small_block() {
        let s = sieve_segment(2, 9).unwrap();
        assert_eq!(s.codes(), &[2, 3, 2, 5, 0, 7, 2, 3, 0]);
    }

    #[test]
    fn one_is_not_a_prime_power() {
        assert_eq!(sieve_segment(1, 1).unwrap().codes(), &[0]);
    }

    #[test]
    fn empty_range_rejected() {
        assert!(matches!(sieve_segment(5, 0), Err(Error::EmptyRange)));
        assert!(matches!(sieve_segment(0, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn agrees_with_trial_division_near_a_million() {
        let s = sieve_segment(1_000_000, 1 << 10).unwrap();
        for (i, &c) in s.codes().iter().enumerate() {
            assert_eq!(c, trial_code(1_000_000 + i as u64), "n = {}", 1_000_000 + i);
        }
    }

    #[test]
    fn agrees_with_trial_division_up_to_1e5() {
        let s = sieve_segment(1, 100_000).unwrap();
        for (i, &c) in s.codes().iter().enumerate() {
            let n = 1 + i as u64;
            assert_eq!(c, trial_code(n), "n = {n}");
            assert_eq!(s.lambda(n).unwrap() > 0.0, trial_code(n) != 0);
        }
    }

    #[test]
    fn deterministic() {
        let a = sieve_segment(123_456_789, 5000).unwrap();
        let b = sieve_segment(123_456_789, 5000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn isqrt_edges() {
        for n in [
            0u64,
            1,
            2,
            3,
            4,
            15,
            16,
            17,
            1 << 40,
            (1 << 40) - 1,
            u64::MAX,
        ] {
            let r = isqrt(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
    }

    #[test]
    fn config_minimum_length() {
        let mut c = SieveConfig::default();
        assert!(c.validate().is_ok());
        c.segment_length = 512;
        assert!(c.validate().is_err());
    }
}
