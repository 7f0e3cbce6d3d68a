//! Convex body representations and support functions.

mod body;
mod geomean;
mod polytope;
mod smooth;
mod zonotope;

pub use body::{Body, SupportExpr};
pub use geomean::{geomean_volume_bounds, GeoMeanBody, GeoMeanBounds};
pub use polytope::{Facet, SymmetricPolytope};
pub use smooth::SmoothBody;
pub use zonotope::{Generator, Zonotope};

use crate::arith::{Scalar, Vector};
use crate::error::Result;

/// `h_B(x)` for a body.
pub fn support_eval(body: &Body, x: &Vector) -> Result<Scalar> {
    body.support(x)
}

/// `f(x)` for a signed support expression.
pub fn support_eval_expr(f: &SupportExpr, x: &Vector) -> Result<Scalar> {
    f.eval(x)
}
