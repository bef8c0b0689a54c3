//! Compensated summation.
//!
//! Every long accumulation in the crate goes through [`Neumaier`]. Parallel
//! reductions split the index range into fixed-size chunks that do not depend
//! on the thread count, then merge the per-chunk accumulators in ascending
//! order, so results are bit-identical however many workers run.

use std::ops::Range;

use rayon::prelude::*;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn sub(&mut self, v: f64) {
        self.add(-v);
    }

    /// Folds another accumulator into this one.
    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    /// `self - other`, keeping both compensation terms.
    pub fn difference(&self, other: &Neumaier) -> f64 {
        (self.sum - other.sum) + (self.comp - other.comp)
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for Neumaier {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        acc.extend(iter);
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Neumaier>().value()
}

/// Chunk length used by the ordered parallel reductions.
pub const REDUCTION_CHUNK: u64 = 1 << 16;

/// Splits `range` into `chunk`-sized pieces independent of the thread count.
pub fn fixed_chunks(range: Range<u64>, chunk: u64) -> Vec<Range<u64>> {
    assert!(chunk > 0);
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = range.end.min(lo.saturating_add(chunk));
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Σ f(n) over `range`, reduced deterministically in parallel.
pub fn par_sum<F>(range: Range<u64>, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    let partials: Vec<Neumaier> = fixed_chunks(range, REDUCTION_CHUNK)
        .into_par_iter()
        .map(|r| r.map(&f).collect::<Neumaier>())
        .collect();
    let mut total = Neumaier::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(v), 2.0);
        assert_eq!(v.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn difference_of_prefixes() {
        let mut a = Neumaier::new();
        for _ in 0..1000 {
            a.add(0.1);
        }
        let snapshot = a;
        a.add(1e-3);
        assert!((a.difference(&snapshot) - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn chunks_cover_range() {
        let c = fixed_chunks(3..20, 5);
        assert_eq!(c, vec![3..8, 8..13, 13..18, 18..20]);
        assert!(fixed_chunks(5..5, 4).is_empty());
    }

    #[test]
    fn par_sum_matches_serial_bitwise_across_pools() {
        let f = |n: u64| 1.0 / (n as f64);
        let serial = {
            let mut acc = Neumaier::new();
            for r in fixed_chunks(1..300_000, REDUCTION_CHUNK) {
                acc.merge(&r.map(f).collect::<Neumaier>());
            }
            acc.value()
        };
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let got = pool.install(|| par_sum(1..300_000, f));
            assert_eq!(got.to_bits(), serial.to_bits());
        }
    }
}
