//! Sieving and elementary arithmetic: Λ, Λ₀, Λ_m, ψ, μ, φ and Ramanujan sums.

pub mod cache;
mod functions;
mod sieve;
mod sum;
mod table;

pub(crate) use functions::mobius_phi_table;
pub use functions::{
    euler_phi, factorize, gcd, is_prime, lambda, lambda_m, lambda_m_of, mobius, psi, ramanujan_sum,
};
pub use sieve::{
    lambda_of_code, sieve_segment, small_primes, Segment, SieveConfig, DEFAULT_SEGMENT_LENGTH,
    MIN_SEGMENT_LENGTH,
};
pub use sum::{compensated_sum, fixed_chunks, par_sum, Neumaier, REDUCTION_CHUNK};
pub use table::{ConstantLambda, LambdaSource, LambdaTable};
