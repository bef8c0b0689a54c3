//! Hardy–Littlewood singular series 𝔖(𝒟), its centred form 𝔖₀(𝒟), and the
//! pair-case Ramanujan-sum series used as an independent check.
//!
//! 𝔖 is evaluated as the Euler product ∏_p (1 − ν_p/p)(1 − 1/p)^{−k}, truncated
//! at `pmax`. For every prime above `max(2k, span)` the log of the local factor
//! is bounded by k²/p², and Σ_{p>P} p⁻² < 1/P, which gives the certified tail
//! bound `|value| · (exp(k²/pmax) − 1)`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::arith::{compensated_sum, is_prime, mobius_phi_table, small_primes, Neumaier};
use crate::error::{Error, Result};
use crate::tuple::Tuple;

/// Largest tuple accepted by the subset enumerations.
pub const MAX_SUBSET_TUPLE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularValue {
    pub value: f64,
    /// Certified bound on |true value − value|.
    pub tail_bound: f64,
    pub pmax: u64,
}

/// ν_p(𝒟): the number of distinct residues of the offsets modulo `p`.
pub fn residue_count(p: u64, tuple: &Tuple) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(count_residues(p, tuple.offsets()))
}

fn count_residues(p: u64, offsets: &[u64]) -> usize {
    let mut r: Vec<u64> = offsets.iter().map(|d| d % p).collect();
    r.sort_unstable();
    r.dedup();
    r.len()
}

/// True iff some prime `p <= k` has every residue class mod `p` occupied,
/// which is exactly when 𝔖(𝒟) = 0.
pub fn singular_series_zero_test(tuple: &Tuple) -> bool {
    let k = tuple.len() as u64;
    small_primes(k)
        .into_iter()
        .any(|p| count_residues(u64::from(p), tuple.offsets()) == p as usize)
}

/// Evaluator that keeps the prime table for one `pmax` and memoises results.
///
/// Values depend only on the residues of the offsets, so tuples are memoised
/// by their normalised translate.
pub struct SingularSeries {
    pmax: u64,
    primes: Vec<u32>,
    // Σ over primes k < p ≤ pmax of ln(1 − k/p) − k ln(1 − 1/p), keyed by k.
    generic_logs: Mutex<HashMap<usize, f64>>,
    memo: Mutex<HashMap<Tuple, SingularValue>>,
}

impl SingularSeries {
    pub fn new(pmax: u64) -> Result<Self> {
        if pmax < 2 {
            return Err(Error::Parameter(format!(
                "pmax = {pmax} must be at least 2"
            )));
        }
        if pmax > u64::from(u32::MAX) {
            return Err(Error::Parameter(format!("pmax = {pmax} exceeds 32 bits")));
        }
        Ok(Self {
            pmax,
            primes: small_primes(pmax),
            generic_logs: Mutex::new(HashMap::new()),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn pmax(&self) -> u64 {
        self.pmax
    }

    fn generic_log_sum(&self, k: usize) -> f64 {
        if let Some(&v) = self.generic_logs.lock().unwrap().get(&k) {
            return v;
        }
        let kf = k as f64;
        let v = compensated_sum(
            self.primes
                .iter()
                .map(|&p| f64::from(p))
                .filter(|&p| p > kf)
                .map(|p| generic_log_factor(kf, p)),
        );
        self.generic_logs.lock().unwrap().insert(k, v);
        v
    }

    /// 𝔖(𝒟) truncated at `pmax`, with its certified tail bound.
    pub fn eval(&self, tuple: &Tuple) -> Result<SingularValue> {
        let k = tuple.len();
        if k <= 1 {
            return Ok(SingularValue {
                value: 1.0,
                tail_bound: 0.0,
                pmax: self.pmax,
            });
        }
        let span = tuple.span();
        let needed = span.max(2 * k as u64);
        if self.pmax < needed {
            return Err(Error::Parameter(format!(
                "pmax = {} is below max(2k, span) = {needed} for {tuple}",
                self.pmax
            )));
        }
        let key = tuple.normalized();
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.eval_uncached(&key);
        self.memo.lock().unwrap().insert(key, v);
        Ok(v)
    }

    fn eval_uncached(&self, tuple: &Tuple) -> SingularValue {
        let k = tuple.len();
        let kf = k as f64;
        let zero = SingularValue {
            value: 0.0,
            tail_bound: 0.0,
            pmax: self.pmax,
        };
        // Primes with p ≤ max(k, span) may see ν_p < k; above that every local
        // factor is the generic one already summed in `generic_log_sum`.
        let mut log = Neumaier::new();
        log.add(self.generic_log_sum(k));
        let cutoff = tuple.span().max(k as u64);
        for &p in self.primes.iter().take_while(|&&p| u64::from(p) <= cutoff) {
            let nu = count_residues(u64::from(p), tuple.offsets());
            if nu == p as usize {
                return zero;
            }
            let pf = f64::from(p);
            let actual = (-(nu as f64) / pf).ln_1p() - kf * (-1.0 / pf).ln_1p();
            if pf > kf {
                if nu != k {
                    log.add(actual - generic_log_factor(kf, pf));
                }
            } else {
                log.add(actual);
            }
        }
        let value = log.value().exp();
        SingularValue {
            value,
            tail_bound: value.abs() * (kf * kf / self.pmax as f64).exp_m1(),
            pmax: self.pmax,
        }
    }

    /// 𝔖₀(𝒟) = Σ_{𝒥 ⊆ {1..k}} (−1)^{k−|𝒥|} 𝔖(𝒟_𝒥), with 𝔖(∅) = 1.
    pub fn centered(&self, tuple: &Tuple) -> Result<SingularValue> {
        let k = tuple.len();
        if k > MAX_SUBSET_TUPLE {
            return Err(Error::Size(format!(
                "2^{k} subsets requested; the limit is k <= {MAX_SUBSET_TUPLE}"
            )));
        }
        let mut value = Neumaier::new();
        let mut tail = Neumaier::new();
        for mask in 0..(1u32 << k) {
            let sub = self.eval(&tuple.subset(mask))?;
            let sign = if (k - mask.count_ones() as usize).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            value.add(sign * sub.value);
            tail.add(sub.tail_bound);
        }
        Ok(SingularValue {
            value: value.value(),
            tail_bound: tail.value(),
            pmax: self.pmax,
        })
    }
}

#[inline]
fn generic_log_factor(k: f64, p: f64) -> f64 {
    (-k / p).ln_1p() - k * (-1.0 / p).ln_1p()
}

/// 𝔖(𝒟) for a single tuple; see [`SingularSeries`] for repeated evaluation.
pub fn singular_series(tuple: &Tuple, pmax: u64) -> Result<SingularValue> {
    SingularSeries::new(pmax)?.eval(tuple)
}

/// 𝔖₀(𝒟) for a single tuple.
pub fn s0(tuple: &Tuple, pmax: u64) -> Result<SingularValue> {
    SingularSeries::new(pmax)?.centered(tuple)
}

/// Σ_{q ≤ q_max} μ(q)²/φ(q)² · c_q(d), the pair singular series 𝔖({0, d}) as a
/// Ramanujan-sum expansion.
pub fn pair_qsum(d: u64, q_max: u64) -> f64 {
    let q_max = q_max as usize;
    let (mu, phi) = mobius_phi_table(q_max);
    let mut acc = Neumaier::new();
    for q in 1..=q_max {
        if mu[q] == 0 {
            continue;
        }
        // q is squarefree here, so c_q(d) = Σ_{δ | (q,d)} δ μ(q/δ).
        let g = crate::arith::gcd(q as u64, d) as usize;
        let mut c = 0i64;
        for delta in 1..=g {
            if g.is_multiple_of(delta) {
                c += delta as i64 * i64::from(mu[q / delta]);
            }
        }
        if c != 0 {
            let ph = phi[q] as f64;
            acc.add(c as f64 / (ph * ph));
        }
    }
    acc.value()
}
