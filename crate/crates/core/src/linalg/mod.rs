//! Exact integer matrix kernels: Smith and Hermite normal forms, integer
//! kernels, the congruence canonical form of skew matrices, and seeded
//! unimodular scrambles.
//!
//! Everything works over [`num_bigint::BigInt`]; pivoting in Smith form
//! reduction overflows fixed-width words quickly.

mod hnf;
mod matrix;
mod skew;
mod snf;
mod unimodular;

pub use hnf::{column_hnf, hnf_contains, integer_kernel, row_hnf, RowHermite};
pub use matrix::{int_vec, IntMatrix};
pub use skew::{skew_canonical_form, SkewCanonical, SkewIntMatrix};
pub use snf::{snf, unimodular_inverse, SmithForm};
pub use unimodular::random_unimodular;
