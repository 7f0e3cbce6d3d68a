//! Numerical Hilbert-operator checks for smooth bodies: the planar
//! eigenproblem, the planar generating measure, and quadrature on `S²` for
//! the Bochner identity and the quadratic spectral inequality.

mod circle;
mod planar;
mod sphere;

pub use circle::{circle_spectrum, CircleOperator, CircleSpectrum, Eigenvalue, Parity, MAX_RITZ_MODES};
pub use planar::{generating_support, planar_generating_measure, GeneratingMeasure};
pub use sphere::{
    bochner_convergence, bochner_residual, check_superlich_quadrature, first_mixed_volume, mixed_discriminant_2x2, quadratic_forms,
    BochnerResidual, QuadraticForms, SmoothExpr, SphereQuadrature,
};

use crate::arith::Scalar;
use crate::inequalities::InequalityReport;

/// Planar form of the quadratic spectral inequality, `⟨Af, Af⟩ ≥ ⟨f, f⟩`
/// for even `f` sampled on the operator grid.
pub fn check_superlich_circle(op: &CircleOperator, f: &[f64]) -> InequalityReport {
    let (af_af, f_af, f_f) = op.quadratic_forms(f);
    InequalityReport::new("superlich", 2, "grid", Scalar::float(af_af), Scalar::float(f_f))
        .term("f_af", Scalar::float(f_af))
}
