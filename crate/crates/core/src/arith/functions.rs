//! Elementary arithmetic functions evaluated one argument at a time.

use super::sieve::SieveConfig;
use super::table::LambdaTable;
use crate::error::{Error, Result};

/// Prime factorisation by trial division, as `(p, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3;
    while p * p <= n {
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    matches!(factorize(n).as_slice(), [(_, 1)])
}

/// Von Mangoldt Λ(n): `ln p` if `n = p^j`, else 0.
pub fn lambda(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("Λ(0) is undefined".into()));
    }
    Ok(match factorize(n).as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    })
}

/// Λ_m given Λ(n): `Λ^m · (Λ - 1)`, with `0^0 = 1` so `m = 0` yields Λ₀.
#[inline]
pub fn lambda_m_of(lambda: f64, m: u32) -> f64 {
    lambda.powi(m as i32) * (lambda - 1.0)
}

pub fn lambda_m(n: u64, m: u32) -> Result<f64> {
    lambda(n).map(|l| lambda_m_of(l, m))
}

/// Chebyshev ψ(x), sieving `[1, x]` on the fly.
pub fn psi(x: u64) -> Result<f64> {
    if x == 0 {
        return Ok(0.0);
    }
    LambdaTable::build(x, &SieveConfig::default())?.psi(x)
}

pub fn mobius(q: u64) -> Result<i64> {
    if q == 0 {
        return Err(Error::Domain("μ(0) is undefined".into()));
    }
    let f = factorize(q);
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len().is_multiple_of(2) {
        Ok(1)
    } else {
        Ok(-1)
    }
}

pub fn euler_phi(q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Domain("φ(0) is undefined".into()));
    }
    Ok(factorize(q)
        .into_iter()
        .fold(q, |acc, (p, _)| acc / p * (p - 1)))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Ramanujan sum c_q(d) = Σ_{1≤a≤q, (a,q)=1} e(ad/q), via Σ_{δ | (q,d)} δ μ(q/δ).
pub fn ramanujan_sum(q: u64, d: i64) -> Result<i64> {
    if q == 0 {
        return Err(Error::Domain("c_0 is undefined".into()));
    }
    let g = gcd(q, d.unsigned_abs());
    let mut total = 0i64;
    for delta in divisors(g) {
        total += delta as i64 * mobius(q / delta)?;
    }
    Ok(total)
}

/// μ and φ for every `q <= limit` by a linear sieve; index 0 is unused.
pub(crate) fn mobius_phi_table(limit: usize) -> (Vec<i8>, Vec<u64>) {
    let mut mu = vec![0i8; limit + 1];
    let mut phi = vec![0u64; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
        phi[1] = 1;
    }
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
            phi[i] = i as u64 - 1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                phi[ip] = phi[i] * p as u64;
                break;
            }
            mu[ip] = -mu[i];
            phi[ip] = phi[i] * (p as u64 - 1);
        }
    }
    (mu, phi)
}
