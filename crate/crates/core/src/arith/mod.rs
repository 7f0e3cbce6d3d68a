//! Dual-backend arithmetic: exact rationals and binary floats behind one
//! [`Scalar`] type, with the vector and determinant kernels built on it.

mod linalg;
mod scalar;
mod vector;

pub use linalg::{
    det, exact_nth_root, exact_sqrt, gram_det, generalized_cross, nth_root_bounds,
    orthogonal_complement, rank,
};
pub use scalar::{parse_rational, Backend, Scalar};
pub use vector::{line_direction, primitive_direction, Direction, Vector};

pub(crate) use scalar::rational_to_f64;
