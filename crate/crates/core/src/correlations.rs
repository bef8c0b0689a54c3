//! Tuple correlations of Λ and Λ₀, the error terms E_k(x; 𝒟), and the mean
//! square of E_k over all tuples of offsets in `[1, H]`.

use rayon::prelude::*;

use crate::arith::{par_sum, LambdaSource, Neumaier};
use crate::error::{Error, Result};
use crate::singular::SingularSeries;
use crate::tuple::Tuple;

/// Largest k accepted by [`avg_sq_error`].
pub const MAX_AVG_K: usize = 3;

/// Σ_{n ≤ x} ∏_i Λ(n + d_i). The empty tuple gives ⌊x⌋.
pub fn lambda_correlation<S: LambdaSource>(src: &S, x: u64, tuple: &Tuple) -> Result<f64> {
    correlate(src, x, tuple, |l| l)
}

/// Σ_{n ≤ x} ∏_i Λ₀(n + d_i) with Λ₀ = Λ − 1.
pub fn lambda0_correlation<S: LambdaSource>(src: &S, x: u64, tuple: &Tuple) -> Result<f64> {
    correlate(src, x, tuple, |l| l - 1.0)
}

fn correlate<S, F>(src: &S, x: u64, tuple: &Tuple, weight: F) -> Result<f64>
where
    S: LambdaSource,
    F: Fn(f64) -> f64 + Sync,
{
    if x == 0 {
        return Ok(0.0);
    }
    src.require(x + tuple.max_offset())?;
    let offsets = tuple.offsets();
    Ok(par_sum(1..x + 1, |n| {
        offsets.iter().map(|&d| weight(src.lambda(n + d))).product()
    }))
}

/// E_k(x; 𝒟) = Σ_{n ≤ x} ∏ Λ(n + d_i) − 𝔖(𝒟)·x.
pub fn error_term<S: LambdaSource>(
    src: &S,
    x: u64,
    tuple: &Tuple,
    series: &SingularSeries,
) -> Result<f64> {
    let corr = lambda_correlation(src, x, tuple)?;
    Ok(corr - series.eval(tuple)?.value * x as f64)
}

/// |Σ_{n≤x} ∏Λ₀(n+d_i) − 𝔖₀(𝒟)x| / (Σ_{𝒥 ⊆ 𝒟} |E_{|𝒥|}(x; 𝒟_𝒥)| + 1).
///
/// The inclusion–exclusion lemma says this ratio stays bounded in terms of k.
pub fn lemma1_residual<S: LambdaSource>(
    src: &S,
    x: u64,
    tuple: &Tuple,
    series: &SingularSeries,
) -> Result<f64> {
    if x == 0 {
        return Ok(0.0);
    }
    let centred = lambda0_correlation(src, x, tuple)? - series.centered(tuple)?.value * x as f64;
    let mut errors = Neumaier::new();
    for mask in 0..(1u32 << tuple.len()) {
        errors.add(error_term(src, x, &tuple.subset(mask), series)?.abs());
    }
    Ok(centred.abs() / (errors.value() + 1.0))
}

/// Mean-square error statistic over ordered tuples of distinct offsets in `[1, H]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorStat {
    pub x: u64,
    pub h: u64,
    pub k: usize,
    /// Σ_𝒟 E_k(x; 𝒟)².
    pub v: f64,
    /// `v / (x · H^k)`.
    pub normalized: f64,
}

/// Offset shapes `(0, t_2, …, t_k)` with `0 < t_2 < … < t_k <= H - 1`, in
/// lexicographic order.
pub(crate) fn shapes(h: u64, k: usize) -> Vec<Vec<u64>> {
    fn rec(start: u64, max: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for t in start..=max {
            cur.push(t);
            rec(t + 1, max, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || h < k as u64 {
        return out;
    }
    rec(1, h - 1, k - 1, &mut vec![0], &mut out);
    out
}

/// Σ over ordered tuples 𝒟 of k distinct offsets in `[1, H]` of E_k(x; 𝒟)².
///
/// Each increasing tuple is a translate `d_1 + shape`. For a fixed shape a
/// single prefix pass A(y) = Σ_{m ≤ y} ∏ Λ(m + t_i) yields every correlation
/// as A(x + d_1) − A(d_1), so the cost is O(x · C(H−1, k−1)) rather than
/// O(x · H^k). Every increasing tuple stands for k! ordered ones.
pub fn avg_sq_error<S: LambdaSource>(
    src: &S,
    x: u64,
    h: u64,
    k: usize,
    series: &SingularSeries,
) -> Result<ErrorStat> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if k > MAX_AVG_K {
        return Err(Error::Size(format!(
            "k = {k} exceeds the limit {MAX_AVG_K}"
        )));
    }
    let stat = |v: f64| ErrorStat {
        x,
        h,
        k,
        v,
        normalized: v / (x as f64 * (h as f64).powi(k as i32)),
    };
    if h < k as u64 {
        return Ok(stat(0.0));
    }
    if x < h {
        return Err(Error::Precondition(format!(
            "x = {x} must be at least H = {h}"
        )));
    }
    src.require(x + h)?;
    let values = src.lambda_values(1, x + h + 1);
    let lam = |m: u64| values[(m - 1) as usize];
    let xf = x as f64;

    let per_shape: Vec<Vec<f64>> = shapes(h, k)
        .into_par_iter()
        .map(|shape| -> Result<Vec<f64>> {
            let tail = *shape.last().unwrap();
            let starts = h - tail;
            let sigma = series.eval(&Tuple::new(shape.clone())?)?.value;
            let mut low = vec![Neumaier::new(); starts as usize];
            let mut errors = Vec::with_capacity(starts as usize);
            let mut acc = Neumaier::new();
            for y in 1..=x + starts {
                acc.add(shape.iter().map(|&t| lam(y + t)).product());
                if y <= starts {
                    low[(y - 1) as usize] = acc;
                }
                if y > x {
                    let d1 = y - x;
                    errors.push(acc.difference(&low[(d1 - 1) as usize]) - sigma * xf);
                }
            }
            Ok(errors)
        })
        .collect::<Result<_>>()?;

    let orderings: f64 = (1..=k).map(|i| i as f64).product();
    let mut v = Neumaier::new();
    for e in per_shape.iter().flatten() {
        v.add(orderings * e * e);
    }
    Ok(stat(v.value()))
}

/// Least-squares slope of ln V against ln x.
pub fn exponent_fit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Parameter("at least two points are needed".into()));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Parameter(
            "x values must be strictly increasing".into(),
        ));
    }
    if points.iter().any(|&(x, v)| x <= 0.0 || v <= 0.0) {
        return Err(Error::Parameter("x and V must be positive".into()));
    }
    let n = points.len() as f64;
    let (lx, lv): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, v)| (x.ln(), v.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let mv = lv.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&lv).map(|(a, b)| (a - mx) * (b - mv)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{LambdaTable, SieveConfig};

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
    fn exponent_fit_examples() {
        assert!((exponent_fit(&[(10.0, 10.0), (100.0, 100.0)]).unwrap() - 1.0).abs() < 1e-12);
        assert!(exponent_fit(&[(10.0, 3.0), (100.0, 3.0)]).unwrap().abs() < 1e-12);
        let s = exponent_fit(&[(10.0, 10.0), (100.0, 1000.0), (1000.0, 100_000.0)]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!(exponent_fit(&[(10.0, 1.0)]).is_err());
        assert!(exponent_fit(&[(10.0, 1.0), (10.0, 2.0)]).is_err());
    }

    #[test]
    fn shapes_enumerate_combinations() {
        assert_eq!(shapes(4, 1), vec![vec![0]]);
        assert_eq!(shapes(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert_eq!(shapes(5, 3).len(), 6);
        assert!(shapes(2, 3).is_empty());
    }

    #[test]
    fn correlation_small_cases() {
        let t = table(100);
        let psi10 = t.psi(10).unwrap();
        let c = lambda_correlation(&t, 10, &Tuple::new(vec![0]).unwrap()).unwrap();
        assert!((c - psi10).abs() < 1e-12);
        assert_eq!(
            lambda_correlation(&t, 0, &Tuple::new(vec![0, 2]).unwrap()).unwrap(),
            0.0
        );
        assert_eq!(lambda_correlation(&t, 7, &Tuple::empty()).unwrap(), 7.0);
        assert_eq!(lambda0_correlation(&t, 7, &Tuple::empty()).unwrap(), 7.0);
    }

    #[test]
    fn twin_correlation_to_ten() {
        let t = table(100);
        let expected: f64 = (1..=10u64)
            .map(|n| crate::arith::lambda(n).unwrap() * crate::arith::lambda(n + 2).unwrap())
            .sum();
        let l = |n: f64| n.ln();
        let by_hand = l(2.0) * l(2.0)
            + l(3.0) * l(5.0)
            + l(5.0) * l(7.0)
            + l(7.0) * l(3.0)
            + l(3.0) * l(11.0);
        assert!((expected - by_hand).abs() < 1e-12);
        let c = lambda_correlation(&t, 10, &Tuple::new(vec![0, 2]).unwrap()).unwrap();
        assert!((c - expected).abs() < 1e-12, "{c} vs {expected}");
    }

    #[test]
    fn lambda0_single_offset() {
        let t = table(100);
        let c = lambda0_correlation(&t, 5, &Tuple::new(vec![1]).unwrap()).unwrap();
        assert!((c - (t.psi(6).unwrap() - t.psi(1).unwrap() - 5.0)).abs() < 1e-12);
    }

    #[test]
    fn error_term_single_offset() {
        let t = table(2000);
        let s = SingularSeries::new(100).unwrap();
        let e = error_term(&t, 1000, &Tuple::new(vec![7]).unwrap(), &s).unwrap();
        let expect = t.psi(1007).unwrap() - t.psi(7).unwrap() - 1000.0;
        assert!((e - expect).abs() < 1e-9);
        assert_eq!(
            error_term(&t, 0, &Tuple::new(vec![0, 2]).unwrap(), &s).unwrap(),
            0.0
        );
    }

    #[test]
    fn coverage_is_checked() {
        let t = table(100);
        let err = lambda_correlation(&t, 4096, &Tuple::new(vec![0, 2]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Coverage { .. }));
    }

    #[test]
    fn avg_sq_error_guards() {
        let t = table(1000);
        let s = SingularSeries::new(100).unwrap();
        assert!(matches!(
            avg_sq_error(&t, 100, 10, 4, &s),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            avg_sq_error(&t, 5, 10, 1, &s),
            Err(Error::Precondition(_))
        ));
        assert_eq!(avg_sq_error(&t, 100, 1, 2, &s).unwrap().v, 0.0);
        assert_eq!(avg_sq_error(&t, 1, 2, 3, &s).unwrap().v, 0.0);
    }

    #[test]
    fn avg_sq_error_k1_direct() {
        let t = table(100);
        let s = SingularSeries::new(100).unwrap();
        let stat = avg_sq_error(&t, 10, 10, 1, &s).unwrap();
        let direct: f64 = (1..=10u64)
            .map(|d| {
                let e = t.psi(10 + d).unwrap() - t.psi(d).unwrap() - 10.0;
                e * e
            })
            .sum();
        assert!((stat.v - direct).abs() < 1e-10 * direct.max(1.0));
        assert_eq!(stat.normalized, stat.v / 100.0);
    }
}
