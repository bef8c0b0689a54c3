//! The Gaussian main term μ_K H^{K/2} ∫_1^N (ln(x/H) + B)^{K/2} dx and the
//! integrals I_m(N).

use crate::error::{Error, Result};
use crate::quad::integrate;

/// Euler's constant C₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

const MAIN_TERM_REL_TOL: f64 = 1e-11;
const IM_REL_TOL: f64 = 1e-11;

/// μ_k = 1·3···(k−1) for even k, 0 for odd k (the k-th standard normal moment).
pub fn mu_gauss(k: u32) -> u64 {
    if k % 2 == 1 {
        0
    } else {
        (1..k).step_by(2).map(u64::from).product()
    }
}

/// B = 1 − C₀ − ln 2π.
pub fn constant_b() -> f64 {
    1.0 - EULER_GAMMA - std::f64::consts::TAU.ln()
}

/// μ_K H^{K/2} ∫_1^N (ln(x/H) + B)^{K/2} dx. Closed form for K = 2, quadrature otherwise.
pub fn main_term(n: u64, h: u64, k: u32) -> f64 {
    match k {
        _ if k % 2 == 1 => 0.0,
        2 => main_term_k2_closed_form(n, h),
        _ => main_term_quadrature(n, h, k),
    }
}

/// H · [x (ln(x/H) + B − 1)]_1^N.
pub fn main_term_k2_closed_form(n: u64, h: u64) -> f64 {
    let hf = h as f64;
    let b = constant_b();
    let anti = |x: f64| x * ((x / hf).ln() + b - 1.0);
    hf * (anti(n as f64) - anti(1.0))
}

/// The main term by adaptive quadrature in `u = ln x`, for any K.
pub fn main_term_quadrature(n: u64, h: u64, k: u32) -> f64 {
    let mu = mu_gauss(k);
    if mu == 0 || n <= 1 {
        return 0.0;
    }
    let half = (k / 2) as i32;
    let shift = constant_b() - (h as f64).ln();
    let integral = integrate(
        |u| (u + shift).powi(half) * u.exp(),
        0.0,
        (n as f64).ln(),
        MAIN_TERM_REL_TOL,
        0.0,
    );
    mu as f64 * (h as f64).powi(half) * integral.value
}

/// I_m(N) = ∫_1^N ∏_i (ln x)^{m_i − 1} (ln x − 1) dx over the entries of `m` (all ≥ 1).
pub fn i_m_integral(upper: f64, m: &[u32]) -> Result<f64> {
    if upper.is_nan() || upper < 1.0 {
        return Err(Error::Parameter(format!(
            "upper limit {upper} must be at least 1"
        )));
    }
    if m.contains(&0) {
        return Err(Error::Parameter("I_m only takes exponents m_i >= 1".into()));
    }
    if m.is_empty() {
        return Ok(upper - 1.0);
    }
    let r = integrate(
        |u| {
            m.iter()
                .map(|&mi| u.powi(mi as i32 - 1) * (u - 1.0))
                .product::<f64>()
                * u.exp()
        },
        0.0,
        upper.ln(),
        IM_REL_TOL,
        1e-300,
    );
    Ok(r.value)
}
