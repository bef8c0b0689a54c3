//! Short-interval moments M_K(N; H), their combinatorial expansion, and the
//! Gaussian main term they are compared against.

mod expansion;
mod gaussian;
mod report;
mod window;

pub use expansion::{enumerate_expansion, expansion_moment, l_k, CompositionTerm, MAX_EXPANSION_K};
pub use gaussian::{
    constant_b, i_m_integral, main_term, main_term_k2_closed_form, main_term_quadrature, mu_gauss,
    EULER_GAMMA,
};
pub use report::{in_uniform_range, moment_report, moment_reports, MomentReport};
pub use window::{window_moments, WindowSum, WINDOW_RESEED};
