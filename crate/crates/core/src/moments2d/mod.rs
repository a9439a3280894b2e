//! Two-variable truncated moment sequences and the matrices built from them.

mod matrix;
mod poly;
mod seq;

pub use matrix::{
    column_relations, hyponormality_matrix, is_moment_matrix, localizing_matrix, moment_matrix, Axis,
    MatrixKind, MomentMat,
};
pub use poly::{monomial_basis, Monomial, Poly2, PolyRelation};
pub use seq::MomentSeq2;
