//! Laboratory for the zeros of random functions `F(z) = Σ ξ_i φ_i(z)`.
//!
//! * [`ensembles`] samples Kac, Weyl, elliptic, trigonometric, Taylor and
//!   user-defined families and evaluates them stably.
//! * [`rootfind`] locates their zeros, globally or on a window.
//! * [`statistics`] runs reproducible Monte Carlo estimators of local
//!   zero statistics.
//! * [`baselines`] evaluates the gaussian answers: the Kac–Rice integral
//!   and the closed forms.
//! * [`conditions`] probes moment matching, anti-concentration,
//!   delocalization, derivative growth and the Jensen, Green and Parseval
//!   identities.
//! * [`cli`] wires everything into the `rootlab` binary.

// `!(x > 0.0)` is the NaN-rejecting form used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod cli;
pub mod conditions;
pub mod ensembles;
mod error;
pub mod region;
pub mod rng;
pub mod rootfind;
pub mod special;
pub mod statistics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use region::Region;
pub use rng::RngStream;
