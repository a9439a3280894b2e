//! Weighted-shift weights, their moments and Berger measures.

mod measure;
mod recursive;
mod weights;

pub use measure::{marginals, moments_of_measure, restricted_measure, AtomicMeasure1, AtomicMeasure2};
pub use recursive::{abc_measure, recursive_moments, RecursiveMeasure1};
pub use weights::{
    check_commutative, moments_from_weights, shift_moment, weights_from_measure, weights_from_moments,
    ShiftIndex, WeightFamily2, WeightSeq1,
};
