//! Verification engine for mixed volumes, mixed area measures and the local
//! logarithmic Brunn-Minkowski inequality.
//!
//! Zonotopes and centrally symmetric polytopes are handled exactly over the
//! rationals; smooth zonoids (sums of ellipsoids) are handled numerically by
//! the [`spectral`] module.

pub mod arith;
pub mod bodies;
pub mod equality;
pub mod error;
pub mod inequalities;
pub mod io;
pub mod mixedvol;
pub mod spectral;
pub mod suite;

pub use error::{Error, Result};
