//! Numerical machinery for derivatives of the Riemann zeta function and
//! Dirichlet L-functions close to the 1-line.
//!
//! The crate provides:
//!
//! - [`arith`]: prime sieves, factorizations, and friable-number counting
//!   (`Ψ(x, y)` and its weighted variants);
//! - [`dickman`]: tables of the Dickman function `ρ(u)` and the
//!   exponentially weighted moments `∫ e^{au} u^ℓ ρ(u) du` that appear as
//!   leading constants in extreme-value estimates;
//! - [`characters`]: exact Dirichlet character groups mod q;
//! - [`evaluators`]: truncated Dirichlet-series evaluation of `ζ^(ℓ)`,
//!   `log ζ`, and `L^(ℓ)(σ, χ)`;
//! - [`resonance`]: divisor-closed resonators, Gál-type weighted sums, and
//!   numeric lower-bound certificates;
//! - [`scan`]: extreme-value searches over `t ∈ [T, 2T]` and over the
//!   characters mod q, with predicted envelopes for comparison.
//!
//! All operations are deterministic: parallel reductions run over fixed
//! blocks folded in index order, so results do not depend on the number of
//! worker threads.

pub mod arith;
pub mod characters;
pub mod dickman;
pub mod error;
pub mod evaluators;
pub mod numeric;
pub mod resonance;
pub mod scan;

pub(crate) mod nufft;

pub use error::{Error, Result};
