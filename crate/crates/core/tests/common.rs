#![allow(dead_code)]

use hlmoments::arith::lambda;
use hlmoments::{LambdaTable, SieveConfig};

pub fn table(limit: u64) -> LambdaTable {
    LambdaTable::build(
        limit,
        &SieveConfig {
            segment_length: 1 << 14,
            cache_dir: None,
        },
    )
    .unwrap()
}

/// Λ(1..=limit) by trial division, index 0 holding Λ(1).
pub fn trial_lambdas(limit: u64) -> Vec<f64> {
    (1..=limit).map(|n| lambda(n).unwrap()).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Composite Simpson rule with `2 * half_steps` panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, half_steps: usize) -> f64 {
    let n = 2 * half_steps;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
