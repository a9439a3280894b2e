//! Exact rational linear algebra: determinants, ranks, semidefiniteness, range-restricted
//! solves, flat (rank-preserving) completions and kernel bases.
//!
//! Nothing in here rounds. Determinant and rank run fraction-free on integer-scaled rows;
//! the PSD test and the solvers eliminate directly over the rationals.

mod field;
mod mat;
mod quad;
mod rat;

pub use field::{solve_unique, Field};
pub use mat::{det, flat_complete, inverse, is_psd, kernel_basis, rank, solve_in_range, Mat};
pub use quad::{quadratic_roots, QuadExt};
pub use rat::{ParseRatError, Rat};
