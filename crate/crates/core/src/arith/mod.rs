//! Exact rational scalars, vectors and matrices.
//!
//! Every quantity computed by this crate is an exact rational. Determinants
//! and linear solves use fraction-free elimination on integer-scaled rows.

mod matrix;
mod scalar;
mod vector;

pub use matrix::{integer_det, integer_rank, rank_of, RationalMatrix};
pub use scalar::Rational;
pub use vector::{gcd_all, primitive_bigint, primitive_integer, RationalVector};

/// `n!` as a rational.
pub fn factorial(n: usize) -> Rational {
    (1..=n).map(Rational::from).product()
}
