//! Numerical tools for the distribution of primes in short intervals.
//!
//! * [`arith`]: segmented sieve of exact prime-power codes, Λ, ψ, μ, φ, c_q.
//! * [`singular`]: Hardy–Littlewood singular series 𝔖(𝒟) and 𝔖₀(𝒟).
//! * [`correlations`]: Σ ∏Λ(n+d_i), error terms E_k(x; 𝒟) and their mean square.
//! * [`moments`]: M_K(N; H), its expansion into L_k(m), and the Gaussian main term.
//!
//! All long sums are compensated and reduced over fixed chunks in ascending
//! order, so results do not depend on the number of worker threads.

pub mod arith;
pub mod correlations;
mod error;
pub mod moments;
pub mod quad;
pub mod singular;
mod tuple;

pub use arith::{LambdaSource, LambdaTable, SieveConfig};
pub use error::{Error, Result};
pub use singular::{SingularSeries, SingularValue};
pub use tuple::Tuple;
