//! Combinatorial expansion of M_K(N; H) into the correlation sums L_k(m).
//!
//! Writing Λ₀^M = Σ_{m<M} (−1)^{M−1−m} C(M−1, m) Λ_m and grouping the K
//! offsets of (Σ_d Λ₀(n+d))^K by their distinct values gives
//!
//! M_K = Σ_k (1/k!) Σ_{M₁+…+M_k=K} K!/(M₁!…M_k!) Σ_m ∏_i (−1)^{M_i−1−m_i} C(M_i−1, m_i) L_k(m),
//!
//! where L_k(m) sums ∏ Λ_{m_i}(n + d_i) over ordered tuples of distinct d_i in
//! `[1, H]` and `1 <= n <= N`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;

use crate::arith::{lambda_m_of, par_sum, LambdaSource, Neumaier};
use crate::error::{Error, Result};

/// Largest K the expansion is enumerated for.
pub const MAX_EXPANSION_K: u32 = 8;

/// One `(k, M, m)` term of the expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTerm {
    pub k: usize,
    /// Composition `M_1 + … + M_k = K`.
    pub parts: Vec<u32>,
    /// `0 <= m_i < M_i`.
    pub m: Vec<u32>,
    /// (1/k!) · multinomial(K; M) · ∏ (−1)^{M_i−1−m_i} C(M_i−1, m_i), exactly.
    pub weight: Ratio<i64>,
    /// Zero-based indices with `m_i >= 1`.
    pub h_set: Vec<usize>,
    /// Zero-based indices with `m_i = 0`.
    pub i_set: Vec<usize>,
}

fn factorial(n: u32) -> i64 {
    (1..=i64::from(n)).product()
}

fn binomial(n: u32, r: u32) -> i64 {
    factorial(n) / (factorial(r) * factorial(n - r))
}

fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("K must be at least 1".into()));
    }
    if k > MAX_EXPANSION_K {
        return Err(Error::Size(format!(
            "K = {k} exceeds the enumeration limit {MAX_EXPANSION_K}"
        )));
    }
    Ok(())
}

/// Every term of the expansion of M_K.
pub fn enumerate_expansion(big_k: u32) -> Result<Vec<CompositionTerm>> {
    check_k(big_k)?;
    let mut terms = Vec::new();
    let mut all = compositions(big_k);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    for parts in all {
        let k = parts.len();
        let multinomial = parts
            .iter()
            .fold(factorial(big_k), |acc, &p| acc / factorial(p));
        let base = Ratio::new(multinomial, factorial(k as u32));
        let mut m = vec![0u32; k];
        'odometer: loop {
            let coeff: i64 = parts
                .iter()
                .zip(&m)
                .map(|(&big, &small)| {
                    let sign = if (big - 1 - small) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(big - 1, small)
                })
                .product();
            terms.push(CompositionTerm {
                k,
                parts: parts.clone(),
                m: m.clone(),
                weight: base * coeff,
                h_set: (0..k).filter(|&i| m[i] >= 1).collect(),
                i_set: (0..k).filter(|&i| m[i] == 0).collect(),
            });
            let mut i = 0;
            loop {
                if i == k {
                    break 'odometer;
                }
                m[i] += 1;
                if m[i] < parts[i] {
                    break;
                }
                m[i] = 0;
                i += 1;
            }
        }
    }
    Ok(terms)
}

/// Set partitions of `{0, …, k−1}` as block bitmasks, each with its
/// partition-lattice Möbius coefficient ∏_B (−1)^{|B|−1} (|B|−1)!.
fn set_partitions(k: usize) -> Vec<(Vec<u32>, i64)> {
    fn rec(i: usize, k: usize, blocks: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, i64)>) {
        if i == k {
            let coeff = blocks
                .iter()
                .map(|b| {
                    let s = b.count_ones();
                    let sign = if s % 2 == 1 { 1 } else { -1 };
                    sign * factorial(s - 1)
                })
                .product();
            out.push((blocks.clone(), coeff));
            return;
        }
        for j in 0..blocks.len() {
            blocks[j] |= 1 << i;
            rec(i + 1, k, blocks, out);
            blocks[j] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, k, &mut Vec::new(), &mut out);
    out
}

/// L_k(m) = Σ_{d distinct in [1,H]} Σ_{n=1}^{N} ∏_i Λ_{m_i}(n + d_i).
///
/// The distinctness constraint is removed by Möbius inversion over set
/// partitions: for each partition π the unrestricted sum factorises into
/// window sums W_B(n) = Σ_{d=1}^{H} ∏_{i∈B} Λ_{m_i}(n+d), one per block.
pub fn l_k<S: LambdaSource>(src: &S, n: u64, h: u64, m: &[u32]) -> Result<f64> {
    let k = m.len();
    if k == 0 {
        return Err(Error::Parameter("L_k needs k >= 1".into()));
    }
    if k > MAX_EXPANSION_K as usize {
        return Err(Error::Size(format!("k = {k} exceeds {MAX_EXPANSION_K}")));
    }
    if n == 0 || h < k as u64 {
        return Ok(0.0);
    }
    src.require(n + h)?;
    let values = src.lambda_values(1, n + h + 1);
    let partitions = set_partitions(k);

    // Window sums keyed by the sorted multiset of m-values in a block.
    let mut windows: HashMap<Vec<u32>, Vec<f64>> = HashMap::new();
    let block_key = |mask: u32| {
        let mut key: Vec<u32> = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| m[i])
            .collect();
        key.sort_unstable();
        key
    };
    for (blocks, _) in &partitions {
        for &mask in blocks {
            let key = block_key(mask);
            if windows.contains_key(&key) {
                continue;
            }
            let weights: Vec<f64> = values
                .iter()
                .map(|&l| key.iter().map(|&mi| lambda_m_of(l, mi)).product())
                .collect();
            let w: Vec<f64> = (1..=n)
                .map(|start| {
                    let lo = start as usize; // index of n+1 in `weights`
                    weights[lo..lo + h as usize]
                        .iter()
                        .copied()
                        .collect::<Neumaier>()
                        .value()
                })
                .collect();
            windows.insert(key, w);
        }
    }
    let plan: Vec<(Vec<&Vec<f64>>, f64)> = partitions
        .iter()
        .map(|(blocks, coeff)| {
            let ws = blocks.iter().map(|&b| &windows[&block_key(b)]).collect();
            (ws, *coeff as f64)
        })
        .collect();
    Ok(par_sum(1..n + 1, |i| {
        let idx = (i - 1) as usize;
        plan.iter()
            .map(|(ws, coeff)| coeff * ws.iter().map(|w| w[idx]).product::<f64>())
            .collect::<Neumaier>()
            .value()
    }))
}

/// Σ over the expansion of M_K of weight · L_k(m). Equals M_K(N; H) exactly in
/// exact arithmetic.
pub fn expansion_moment<S: LambdaSource>(src: &S, n: u64, h: u64, big_k: u32) -> Result<f64> {
    check_k(big_k)?;
    if h == 0 {
        return Err(Error::Parameter("H must be at least 1".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    // L_k(m) is symmetric in m, so merge weights per sorted m.
    let mut grouped: BTreeMap<Vec<u32>, Ratio<i64>> = BTreeMap::new();
    for term in enumerate_expansion(big_k)? {
        let mut key = term.m.clone();
        key.sort_unstable();
        *grouped.entry(key).or_insert_with(|| Ratio::from_integer(0)) += term.weight;
    }
    let mut total = Neumaier::new();
    for (m, w) in grouped {
        if *w.numer() == 0 {
            continue;
        }
        let l = l_k(src, n, h, &m)?;
        total.add(*w.numer() as f64 * l / *w.denom() as f64);
    }
    Ok(total.value())
}
