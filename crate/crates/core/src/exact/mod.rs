//! Exact scalars and dense linear algebra.
//!
//! Integers and rationals are `num-bigint` / `num-rational` values, which are
//! canonical on construction (reduced, positive denominator). Gaussian
//! rationals, matrices and the fraction-free solver live here.

mod gaussian;
mod linsolve;
mod matrix;
mod poly;

pub use gaussian::GaussianRational;
pub use linsolve::{determinant_integer, matrix_rank_exact, solve_exact_linear};
pub use matrix::ExactMatrix;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::{eval_descending, expand_root_product, pow_u64};
