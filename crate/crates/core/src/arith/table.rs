use rayon::prelude::*;

use super::cache::{load_or_sieve, segment_bases};
use super::sieve::{base_primes_for, lambda_of_code, sieve_segment_with, Segment, SieveConfig};
use super::sum::par_sum;
use crate::error::{Error, Result};

/// Anything that can supply Λ(n) for `1 <= n <= limit()`.
///
/// The sieve-backed [`LambdaTable`] is the real source; [`ConstantLambda`]
/// exists to exercise the algebra of the moment machinery on inputs with
/// known closed forms.
pub trait LambdaSource: Sync {
    /// Largest `n` for which [`lambda`](Self::lambda) is defined.
    fn limit(&self) -> u64;

    fn lambda(&self, n: u64) -> f64;

    fn require(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            Err(Error::Coverage {
                needed: n,
                covered: self.limit(),
            })
        } else {
            Ok(())
        }
    }

    /// Λ(lo), …, Λ(hi - 1).
    fn lambda_values(&self, lo: u64, hi: u64) -> Vec<f64> {
        (lo..hi).map(|n| self.lambda(n)).collect()
    }
}

/// Λ for every `n` in `[1, limit]`, stored as prime-base codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    codes: Vec<u32>,
}

impl LambdaTable {
    /// Sieves (or loads from the configured cache) enough segments to cover `[1, limit]`.
    pub fn build(limit: u64, config: &SieveConfig) -> Result<Self> {
        config.validate()?;
        let len = config.segment_length;
        let bases = segment_bases(limit.max(1), len);
        let end = bases.last().unwrap() + len as u64;
        let primes = base_primes_for(end);
        if let Some(dir) = &config.cache_dir {
            std::fs::create_dir_all(dir)?;
        }
        let segments: Vec<Segment> = bases
            .par_iter()
            .map(|&b| match &config.cache_dir {
                Some(dir) => load_or_sieve(dir, b, len, &primes).map(|(s, _)| s),
                None => sieve_segment_with(b, len, &primes),
            })
            .collect::<Result<_>>()?;
        Self::from_segments(segments)
    }

    /// Concatenates segments that tile `[1, end)` in order.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        let mut codes = Vec::with_capacity(segments.iter().map(Segment::len).sum());
        let mut next = 1u64;
        for s in segments {
            if s.base() != next {
                return Err(Error::Parameter(format!(
                    "segment starts at {} but {next} was expected",
                    s.base()
                )));
            }
            next = s.end();
            codes.extend(s.into_codes());
        }
        Ok(Self { codes })
    }

    #[inline]
    pub fn code(&self, n: u64) -> u32 {
        debug_assert!(n >= 1);
        self.codes[(n - 1) as usize]
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// ψ(x) = Σ_{n ≤ x} Λ(n).
    pub fn psi(&self, x: u64) -> Result<f64> {
        if x == 0 {
            return Ok(0.0);
        }
        self.require(x)?;
        Ok(par_sum(1..x + 1, |n| self.lambda(n)))
    }
}

impl LambdaSource for LambdaTable {
    fn limit(&self) -> u64 {
        self.codes.len() as u64
    }

    #[inline]
    fn lambda(&self, n: u64) -> f64 {
        lambda_of_code(self.code(n))
    }

    fn lambda_values(&self, lo: u64, hi: u64) -> Vec<f64> {
        self.codes[(lo - 1) as usize..(hi - 1) as usize]
            .iter()
            .map(|&c| lambda_of_code(c))
            .collect()
    }
}

/// Synthetic source with Λ(n) equal to one constant for every n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantLambda {
    pub value: f64,
    pub limit: u64,
}

impl LambdaSource for ConstantLambda {
    fn limit(&self) -> u64 {
        self.limit
    }

    fn lambda(&self, _n: u64) -> f64 {
        self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve::sieve_segment;

    fn small_config() -> SieveConfig {
        SieveConfig {
            segment_length: 1024,
            cache_dir: None,
        }
    }

    #[test]
    fn table_matches_single_segment() {
        let t = LambdaTable::build(5000, &small_config()).unwrap();
        let s = sieve_segment(1, t.limit() as usize).unwrap();
        assert_eq!(t.codes(), s.codes());
        assert_eq!(t.limit(), 5 * 1024);
    }

    #[test]
    fn psi_small_values() {
        let t = LambdaTable::build(100, &small_config()).unwrap();
        let expected = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((t.psi(10).unwrap() - expected).abs() < 1e-12);
        assert!((t.psi(10).unwrap() - 7.832_014_2).abs() < 1e-7);
        assert_eq!(t.psi(1).unwrap(), 0.0);
        assert_eq!(t.psi(0).unwrap(), 0.0);
    }

    #[test]
    fn psi_steps_by_lambda() {
        let t = LambdaTable::build(3000, &small_config()).unwrap();
        let mut prev = 0.0;
        for x in 1..3000 {
            let p = t.psi(x).unwrap();
            assert!(p >= prev);
            assert!((p - prev - t.lambda(x)).abs() < 1e-9);
            prev = p;
        }
    }

    #[test]
    fn coverage_error() {
        let t = LambdaTable::build(1000, &small_config()).unwrap();
        assert!(matches!(
            t.psi(2000),
            Err(Error::Coverage {
                needed: 2000,
                covered: 1024
            })
        ));
    }

    #[test]
    fn rejects_gaps() {
        let a = sieve_segment(1, 10).unwrap();
        let b = sieve_segment(12, 10).unwrap();
        assert!(LambdaTable::from_segments(vec![a, b]).is_err());
    }

    #[test]
    fn cache_round_trip_and_idempotence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config().with_cache_dir(dir.path());
        let stats = crate::arith::cache::sync_cache(4000, &cfg).unwrap();
        assert_eq!(stats.written, 4);
        let again = crate::arith::cache::sync_cache(4000, &cfg).unwrap();
        assert_eq!((again.written, again.skipped), (0, 4));
        let cached = LambdaTable::build(4000, &cfg).unwrap();
        let fresh = LambdaTable::build(4000, &small_config()).unwrap();
        assert_eq!(cached, fresh);
    }

    #[test]
    fn corrupt_cache_is_regenerated() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config().with_cache_dir(dir.path());
        crate::arith::cache::sync_cache(2048, &cfg).unwrap();
        let victim = dir
            .path()
            .join(crate::arith::cache::segment_file_name(1025, 1024));
        std::fs::write(&victim, b"PKMLgarbage").unwrap();
        let stats = crate::arith::cache::sync_cache(2048, &cfg).unwrap();
        assert_eq!((stats.regenerated, stats.skipped), (1, 1));
        let t = LambdaTable::build(2048, &cfg).unwrap();
        assert_eq!(t, LambdaTable::build(2048, &small_config()).unwrap());
    }
}
