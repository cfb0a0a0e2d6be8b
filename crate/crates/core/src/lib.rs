//! Maximum likelihood degrees of rank-2 mixtures of independence models.
//!
//! The ML degree of the variety `X_mn` of `m x n` rank-at-most-2 matrices in
//! the distinguished hyperplane is computed exactly from an Euler
//! characteristic identity: `chi(Y_mn) = -MLdeg + e_mn`, where `chi(Y_mn)`
//! is a fixed linear combination of powers `i^(n-1)` weighted by an integer
//! sequence `Lambda_m`. The sequence for each `m` is recovered by solving a
//! small exact linear system built from the previously known rows.
//!
//! Results are cross-checked by the order-`m` linear recurrence, the
//! closed-form expressions, and a numerical critical point counter for the
//! `3 x 3` model.

pub mod engine;
pub mod error;
pub mod exact;
pub mod io;
pub mod lambda;
pub mod oracle;
pub mod parallel;
pub mod reference;
pub mod strata;
pub mod verify;

pub use engine::{ml_degree, ModelShape};
pub use error::{Error, Result};
pub use lambda::{compute_lambda, lambda_table, LambdaSequence, LambdaTable};
