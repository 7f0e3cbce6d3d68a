use nalgebra::{DMatrix, DVector};

use crate::arith::{det, Backend, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

/// A finite sum of centered ellipsoids, `h(x) = Σ_i sqrt(xᵀ A_i x)`.
///
/// Support values are float-only; the exact engine rejects these bodies.
#[derive(Clone, Debug)]
pub struct SmoothBody {
    dim: usize,
    matrices: Vec<Vec<Vector>>,
    cache: Vec<DMatrix<f64>>,
}

impl PartialEq for SmoothBody {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.matrices == other.matrices
    }
}

impl SmoothBody {
    /// Each matrix is given by rows and must be symmetric positive definite,
    /// which is checked through leading principal minors.
    pub fn new(dim: usize, matrices: Vec<Vec<Vector>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Precondition("smooth body needs at least one matrix".into()));
        }
        for a in &matrices {
            check_dim(dim, a.len())?;
            for row in a {
                check_dim(dim, row.dim())?;
            }
            check_spd(a)?;
        }
        let cache = matrices
            .iter()
            .map(|a| DMatrix::from_fn(dim, dim, |i, j| a[i][j].to_f64()))
            .collect();
        Ok(SmoothBody { dim, matrices, cache })
    }

    pub fn from_f64_matrices(dim: usize, mats: &[DMatrix<f64>]) -> Result<Self> {
        let rows = mats
            .iter()
            .map(|m| (0..dim).map(|i| Vector::from_f64s(&m.row(i).iter().copied().collect::<Vec<_>>())).collect())
            .collect();
        Self::new(dim, rows)
    }

    /// Ellipsoid with semi-axes `a_i` along the coordinate axes.
    pub fn axis_ellipsoid(semi_axes: &[f64]) -> Result<Self> {
        let n = semi_axes.len();
        let m = DMatrix::from_fn(n, n, |i, j| if i == j { semi_axes[i] * semi_axes[i] } else { 0.0 });
        Self::from_f64_matrices(n, &[m])
    }

    pub fn ball(dim: usize) -> Self {
        Self::axis_ellipsoid(&vec![1.0; dim]).expect("unit ball")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Vec<Vector>] {
        &self.matrices
    }

    pub fn f64_matrices(&self) -> &[DMatrix<f64>] {
        &self.cache
    }

    /// Minkowski sum: concatenate the ellipsoid terms.
    pub fn minkowski_sum(&self, other: &SmoothBody) -> Result<SmoothBody> {
        check_dim(self.dim, other.dim)?;
        let mut m = self.matrices.clone();
        m.extend(other.matrices.iter().cloned());
        SmoothBody::new(self.dim, m)
    }

    pub fn support(&self, x: &Vector) -> Result<Scalar> {
        check_dim(self.dim, x.dim())?;
        if x.backend() == Backend::Exact {
            return Err(Error::Unsupported(
                "smooth bodies have no exact support values; use the float backend".into(),
            ));
        }
        Ok(Scalar::float(self.support_f64(&x.to_f64s())))
    }

    pub fn support_f64(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        self.cache.iter().map(|a| x.dot(&(a * &x)).max(0.0).sqrt()).sum()
    }

    /// `∇h(x) = Σ A_i x / H_i` with `H_i = sqrt(xᵀ A_i x)`.
    pub fn gradient_f64(&self, x: &[f64]) -> DVector<f64> {
        let x = DVector::from_column_slice(x);
        let mut g = DVector::zeros(self.dim);
        for a in &self.cache {
            let ax = a * &x;
            let h = x.dot(&ax).sqrt();
            g += ax / h;
        }
        g
    }

    /// `∇²h(x) = Σ A_i / H_i - (A_i x)(A_i x)ᵀ / H_i³`.
    pub fn hessian_f64(&self, x: &[f64]) -> DMatrix<f64> {
        let x = DVector::from_column_slice(x);
        let mut hess = DMatrix::zeros(self.dim, self.dim);
        for a in &self.cache {
            let ax = a * &x;
            let h = x.dot(&ax).sqrt();
            hess += a / h - (&ax * ax.transpose()) / (h * h * h);
        }
        hess
    }
}

fn check_spd(a: &[Vector]) -> Result<()> {
    let n = a.len();
    for i in 0..n {
        for j in 0..i {
            let (x, y) = (&a[i][j], &a[j][i]);
            let symmetric = if x.is_exact() && y.is_exact() {
                x == y
            } else {
                (x.to_f64() - y.to_f64()).abs() <= 1e-12 * (x.to_f64().abs() + y.to_f64().abs()).max(1.0)
            };
            if !symmetric {
                return Err(Error::Precondition(format!("matrix is not symmetric at ({i},{j})")));
            }
        }
    }
    for k in 1..=n {
        let minor: Vec<Vector> = (0..k).map(|i| Vector(a[i].coords()[..k].to_vec())).collect();
        if !det(&minor).is_positive() {
            return Err(Error::Precondition(format!(
                "matrix is not positive definite (leading minor {k} is not positive)"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_support_and_derivatives() {
        let e = SmoothBody::axis_ellipsoid(&[1.0, 2.0]).unwrap();
        let x = [0.6, 0.8];
        let h = e.support_f64(&x);
        assert!((h - (0.36f64 + 4.0 * 0.64).sqrt()).abs() < 1e-15);
        // Euler: ∇h·x = h and ∇²h·x = 0
        let g = e.gradient_f64(&x);
        assert!((g[0] * x[0] + g[1] * x[1] - h).abs() < 1e-14);
        let hx = e.hessian_f64(&x) * DVector::from_column_slice(&x);
        assert!(hx.norm() < 1e-14);
    }

    #[test]
    fn exact_support_is_rejected() {
        let b = SmoothBody::ball(3);
        assert!(matches!(b.support(&Vector::from_ints(&[1, 0, 0])), Err(Error::Unsupported(_))));
        assert_eq!(b.support(&Vector::from_f64s(&[0.0, 3.0, 4.0])).unwrap(), Scalar::float(5.0));
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let rows = vec![Vector::from_ints(&[1, 2]), Vector::from_ints(&[2, 1])];
        assert!(SmoothBody::new(2, vec![rows]).is_err());
        let asym = vec![Vector::from_ints(&[2, 1]), Vector::from_ints(&[0, 2])];
        assert!(SmoothBody::new(2, vec![asym]).is_err());
    }
}
