use rayon::prelude::*;

use crate::arith::{fixed_chunks, LambdaSource, Neumaier};
use crate::error::{Error, Result};

/// Steps between exact recomputations of the running window sum. Also the
/// unit of parallel work, so results do not depend on the thread count.
pub const WINDOW_RESEED: u64 = 1 << 20;

/// Running value of ψ(n + H) − ψ(n) = Σ_{n < m ≤ n+H} Λ(m).
pub struct WindowSum<'a, S: ?Sized> {
    src: &'a S,
    n: u64,
    h: u64,
    acc: Neumaier,
}

impl<'a, S: LambdaSource + ?Sized> WindowSum<'a, S> {
    pub fn seed(src: &'a S, n: u64, h: u64) -> Self {
        let mut w = Self {
            src,
            n,
            h,
            acc: Neumaier::new(),
        };
        w.acc = w.exact();
        w
    }

    fn exact(&self) -> Neumaier {
        (self.n + 1..=self.n + self.h)
            .map(|m| self.src.lambda(m))
            .collect()
    }

    pub fn position(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.acc.value()
    }

    /// The window sum at the current position, recomputed from scratch.
    pub fn recompute(&self) -> f64 {
        self.exact().value()
    }

    /// Moves the window from `(n, n+H]` to `(n+1, n+H+1]`.
    #[inline]
    pub fn advance(&mut self) {
        self.acc.add(self.src.lambda(self.n + self.h + 1));
        self.acc.sub(self.src.lambda(self.n + 1));
        self.n += 1;
    }
}

/// `[M_1, …, M_kmax]` where M_K(N; H) = Σ_{n=1}^{N} (ψ(n+H) − ψ(n) − H)^K.
pub fn window_moments<S: LambdaSource>(src: &S, n: u64, h: u64, kmax: usize) -> Result<Vec<f64>> {
    if h == 0 || kmax == 0 {
        return Err(Error::Parameter("H and Kmax must be at least 1".into()));
    }
    if n == 0 {
        return Ok(vec![0.0; kmax]);
    }
    src.require(n + h)?;
    let hf = h as f64;
    let partials: Vec<Vec<Neumaier>> = fixed_chunks(1..n + 1, WINDOW_RESEED)
        .into_par_iter()
        .map(|range| {
            let mut sums = vec![Neumaier::new(); kmax];
            let mut window = WindowSum::seed(src, range.start, h);
            for i in range.clone() {
                if i > range.start {
                    window.advance();
                }
                let centred = window.value() - hf;
                let mut power = 1.0;
                for s in sums.iter_mut() {
                    power *= centred;
                    s.add(power);
                }
            }
            sums
        })
        .collect();
    let mut total = vec![Neumaier::new(); kmax];
    for chunk in &partials {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    Ok(total.iter().map(Neumaier::value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ConstantLambda, LambdaTable, SieveConfig};

    fn table(limit: u64) -> LambdaTable {
        LambdaTable::build(
            limit,
            &SieveConfig {
                segment_length: 4096,
                cache_dir: None,
            },
        )
        .unwrap()
    }

    #[test]
    fn first_moment_against_psi() {
        let t = table(100);
        let m = window_moments(&t, 10, 5, 3).unwrap();
        let direct: Vec<f64> = (1..=3)
            .map(|k| {
                (1..=10u64)
                    .map(|n| (t.psi(n + 5).unwrap() - t.psi(n).unwrap() - 5.0).powi(k))
                    .sum()
            })
            .collect();
        for (a, b) in m.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn empty_window_hook() {
        let src = ConstantLambda {
            value: 0.0,
            limit: 1000,
        };
        let m = window_moments(&src, 700, 7, 5).unwrap();
        for (k, v) in m.iter().enumerate() {
            assert_eq!(*v, 700.0 * (-7f64).powi(k as i32 + 1));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let t = table(100);
        assert!(window_moments(&t, 10, 0, 2).is_err());
        assert!(window_moments(&t, 10, 3, 0).is_err());
        assert!(matches!(
            window_moments(&t, 5000, 3, 2),
            Err(Error::Coverage { .. })
        ));
        assert_eq!(window_moments(&t, 0, 3, 2).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn running_sum_tracks_exact_sum() {
        let t = table(300_000);
        let mut w = WindowSum::seed(&t, 1, 97);
        for _ in 0..250_000 {
            w.advance();
            if w.position().is_multiple_of(10_007) {
                let exact = w.recompute();
                assert!((w.value() - exact).abs() <= 1e-9 * exact.abs().max(1.0));
            }
        }
    }
}
