use crate::arith::{Backend, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

use super::{SmoothBody, SymmetricPolytope, Zonotope};

/// Any of the three supported body representations.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Zonotope(Zonotope),
    Polytope(SymmetricPolytope),
    Smooth(SmoothBody),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Zonotope(z) => z.dim(),
            Body::Polytope(p) => p.dim(),
            Body::Smooth(s) => s.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Zonotope(_) => "zonotope",
            Body::Polytope(_) => "polytope",
            Body::Smooth(_) => "smooth",
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Body::Zonotope(z) => z.backend(),
            Body::Polytope(p) => p.backend(),
            Body::Smooth(_) => Backend::Float,
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Body> {
        Ok(match self {
            Body::Zonotope(z) => Body::Zonotope(z.to_backend(backend)?),
            Body::Polytope(p) => Body::Polytope(p.to_backend(backend)?),
            Body::Smooth(_) if backend == Backend::Exact => {
                return Err(Error::Unsupported("smooth bodies exist only on the float backend".into()));
            }
            Body::Smooth(s) => Body::Smooth(s.clone()),
        })
    }

    pub fn support(&self, x: &Vector) -> Result<Scalar> {
        match self {
            Body::Zonotope(z) => z.support(x),
            Body::Polytope(p) => p.support(x),
            Body::Smooth(s) => s.support(x),
        }
    }

    pub fn as_zonotope(&self) -> Option<&Zonotope> {
        match self {
            Body::Zonotope(z) => Some(z),
            _ => None,
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        match self {
            Body::Zonotope(z) => z.is_full_dimensional(),
            Body::Polytope(p) => p.is_full_dimensional(),
            Body::Smooth(_) => true,
        }
    }

    /// Exact volume for zonotopes and polytopes.
    pub fn volume(&self) -> Result<Scalar> {
        match self {
            Body::Zonotope(z) => Ok(z.volume()),
            Body::Polytope(p) => p.volume(),
            Body::Smooth(_) => Err(Error::Unsupported("volume of smooth bodies".into())),
        }
    }

    /// `s·B` for `s > 0`.
    pub fn scaled(&self, s: &Scalar) -> Result<Body> {
        if !s.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        Ok(match self {
            Body::Zonotope(z) => Body::Zonotope(z.scaled(s)?),
            Body::Polytope(p) => Body::Polytope(p.scaled(s)?),
            Body::Smooth(b) => {
                let s2 = s * s;
                let ms = b
                    .matrices()
                    .iter()
                    .map(|m| m.iter().map(|r| r.scale(&s2)).collect())
                    .collect();
                Body::Smooth(SmoothBody::new(b.dim(), ms)?)
            }
        })
    }
}

impl From<Zonotope> for Body {
    fn from(z: Zonotope) -> Self {
        Body::Zonotope(z)
    }
}

impl From<SymmetricPolytope> for Body {
    fn from(p: SymmetricPolytope) -> Self {
        Body::Polytope(p)
    }
}

impl From<SmoothBody> for Body {
    fn from(s: SmoothBody) -> Self {
        Body::Smooth(s)
    }
}

/// A formal signed combination `f = Σ α_j h_{B_j}` of support functions.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportExpr {
    dim: usize,
    terms: Vec<(Scalar, Body)>,
}

impl SupportExpr {
    pub fn new(dim: usize, terms: Vec<(Scalar, Body)>) -> Result<Self> {
        for (_, b) in &terms {
            check_dim(dim, b.dim())?;
        }
        Ok(SupportExpr { dim, terms })
    }

    /// `f = h_B`.
    pub fn body(b: impl Into<Body>) -> Self {
        let b = b.into();
        SupportExpr { dim: b.dim(), terms: vec![(Scalar::one(), b)] }
    }

    /// `f = h_L - a·h_M`.
    pub fn difference(l: impl Into<Body>, a: Scalar, m: impl Into<Body>) -> Result<Self> {
        let (l, m) = (l.into(), m.into());
        Self::new(l.dim(), vec![(Scalar::one(), l), (-a, m)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Scalar, Body)] {
        &self.terms
    }

    /// Appends `α·h_B`.
    pub fn plus(mut self, alpha: Scalar, b: impl Into<Body>) -> Result<Self> {
        let b = b.into();
        check_dim(self.dim, b.dim())?;
        self.terms.push((alpha, b));
        Ok(self)
    }

    pub fn scaled(&self, s: &Scalar) -> SupportExpr {
        SupportExpr {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, b)| (a * s, b.clone())).collect(),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<Scalar> {
        check_dim(self.dim, x.dim())?;
        let mut acc = Scalar::zero();
        for (a, b) in &self.terms {
            if a.is_zero() {
                continue;
            }
            acc += a * &b.support(x)?;
        }
        Ok(acc)
    }

    /// Distinct polytope bodies appearing with nonzero coefficient.
    pub fn polytopes(&self) -> Vec<&SymmetricPolytope> {
        let mut out: Vec<&SymmetricPolytope> = Vec::new();
        for (a, b) in &self.terms {
            if let Body::Polytope(p) = b {
                if !a.is_zero() && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn has_smooth(&self) -> bool {
        self.terms.iter().any(|(_, b)| matches!(b, Body::Smooth(_)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_is_signed_sum() {
        let k = Zonotope::cube(3);
        let l = SymmetricPolytope::cross_polytope(3);
        let f = SupportExpr::difference(l, Scalar::ratio(1, 2), k).unwrap();
        let x = Vector::from_ints(&[1, 2, 3]);
        assert_eq!(f.eval(&x).unwrap(), Scalar::int(0));
        assert_eq!(f.eval(&(-&x)).unwrap(), Scalar::int(0));
        assert_eq!(f.polytopes().len(), 1);
    }

    #[test]
    fn smooth_scaling_is_homogeneous() {
        let b = Body::Smooth(SmoothBody::axis_ellipsoid(&[1.0, 2.0]).unwrap());
        let s = b.scaled(&Scalar::int(3)).unwrap();
        let x = Vector::from_f64s(&[0.3, -0.7]);
        let r = s.support(&x).unwrap().to_f64() / b.support(&x).unwrap().to_f64();
        assert!((r - 3.0).abs() < 1e-14);
    }
}
