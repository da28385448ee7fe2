//! Constructive verification that the Apéry numbers
//! A_n = Σ_k C(n,k)² C(n+k,k)² form a Stieltjes moment sequence.
//!
//! The crate builds the moment density φ on (0, c), c = 17 + 12√2, from
//! hypergeometric and Heun closed forms, certifies positivity of the Heun
//! coefficient streams in exact ℚ(√2) arithmetic, and recovers A_k = ∫₀^c x^k φ(x) dx by
//! graded Gauss-Legendre quadrature. The modular-forms identities behind the
//! constants S₀ and S₁ are checked as exact q-series.
//!
//! Module map:
//! - [`exactnum`]: rationals, ℚ(√2), power series, big floats, jets
//! - [`apery`]: the sequence, its recurrence, Hankel determinants
//! - [`heun`]: Heun coefficient streams, evaluation, positivity certificates
//! - [`hyper`]: ₂F₁(1/3, 2/3; 1; z), digamma at rationals, K, S₀, S₁
//! - [`density`]: the maps μ, λ, the solutions u₀, v₀, v₂, u∞ and φ
//! - [`odecheck`]: residuals of the third-order ODE and Frobenius data
//! - [`moments`]: graded quadrature of the moments
//! - [`modular`]: η, E₂, j₃B q-expansions and special values
//! - [`selfcheck`]: the end-to-end acceptance checks
//! - [`cli`]: the command-line front end

pub mod apery;
pub mod cli;
pub mod density;
pub mod error;
pub mod exactnum;
pub mod heun;
pub mod hyper;
pub mod moments;
pub mod modular;
pub mod odecheck;
pub mod selfcheck;

pub use error::{Error, Result};
pub use exactnum::{BigFloat, QSqrt2, Rational};
