//! Exact solvers for the subnormal completion problem of one- and two-variable weighted
//! shifts, built on truncated moment problem machinery: moment and localizing matrices,
//! flat extensions, atomic representing (Berger) measures and flat-extension obstructions.

pub mod error;
pub mod exactla;
pub mod moments2d;
pub mod scp1d;
pub mod scp2d;
pub mod shifts;

pub use error::{Error, Result};
pub use exactla::{Mat, QuadExt, Rat};
