use crate::arith::LambdaSource;
use crate::error::Result;

use super::gaussian::main_term;
use super::window::window_moments;

/// Empirical M_K(N; H) next to the Gaussian main term.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub n: u64,
    pub h: u64,
    pub k: u32,
    pub m_k_empirical: f64,
    pub main_term: f64,
    /// `m_k_empirical / main_term`, unset when the main term is 0 (odd K).
    pub ratio: Option<f64>,
    /// Whether `ln N <= H <= N^{1/K}` holds.
    pub range_ok: bool,
    pub note: String,
}

/// `ln N <= H` and `H^K <= N`, checked in integers where possible.
pub fn in_uniform_range(n: u64, h: u64, k: u32) -> (bool, String) {
    let mut issues = Vec::new();
    if (h as f64) < (n as f64).ln() {
        issues.push(format!("H = {h} < ln N = {:.3}", (n as f64).ln()));
    }
    let above = u128::from(h)
        .checked_pow(k)
        .is_none_or(|p| p > u128::from(n));
    if above {
        issues.push(format!(
            "H = {h} > N^(1/{k}) = {:.3}",
            (n as f64).powf(1.0 / f64::from(k))
        ));
    }
    if issues.is_empty() {
        (true, "ok".into())
    } else {
        (false, issues.join("; "))
    }
}

/// Reports for several K from one pass over the windows.
pub fn moment_reports<S: LambdaSource>(
    src: &S,
    n: u64,
    h: u64,
    ks: &[u32],
) -> Result<Vec<MomentReport>> {
    let kmax = ks.iter().copied().max().unwrap_or(1).max(1) as usize;
    let moments = window_moments(src, n, h, kmax)?;
    Ok(ks
        .iter()
        .map(|&k| {
            let empirical = if k == 0 {
                n as f64
            } else {
                moments[k as usize - 1]
            };
            let main = main_term(n, h, k);
            let (range_ok, note) = in_uniform_range(n, h, k.max(1));
            MomentReport {
                n,
                h,
                k,
                m_k_empirical: empirical,
                main_term: main,
                ratio: (main != 0.0).then(|| empirical / main),
                range_ok,
                note,
            }
        })
        .collect())
}

pub fn moment_report<S: LambdaSource>(src: &S, n: u64, h: u64, k: u32) -> Result<MomentReport> {
    Ok(moment_reports(src, n, h, &[k])?.remove(0))
}
