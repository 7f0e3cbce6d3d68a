use std::f64::consts::PI;

use crate::arith::{Backend, Scalar, Vector};
use crate::bodies::Body;
use crate::error::{check_dim, Error, Result};
use crate::mixedvol::{mixed_area_measure, Atom, AtomicSphericalMeasure, Slot, Weighting};

use super::circle::CircleOperator;

/// Generating measure `η` of a planar symmetric body with
/// `h_K(x) = Σ c |⟨w, x⟩|` over the atoms of `η`, plus the largest
/// reconstruction error seen on the check directions.
#[derive(Clone, Debug)]
pub struct GeneratingMeasure {
    pub eta: AtomicSphericalMeasure,
    pub max_error: Scalar,
}

/// `x ↦ Σ c |⟨w, x⟩|` over a length-weighted measure.
pub fn generating_support(eta: &AtomicSphericalMeasure, x: &Vector) -> Result<Scalar> {
    eta.integrate_homogeneous(|w| Ok(w.dot(x).abs()))
}

fn rotate_clockwise(w: &Vector) -> Vector {
    Vector::new(vec![w[1].clone(), -&w[0]])
}

/// `η = ¼ · (S_K rotated clockwise by a quarter turn)`. Polygons are handled
/// exactly; smooth bodies use `nodes` samples of the curvature density.
pub fn planar_generating_measure(k: &Body, nodes: usize) -> Result<GeneratingMeasure> {
    check_dim(2, k.dim())?;
    let eta = match k {
        Body::Smooth(s) => {
            let op = CircleOperator::from_smooth(s, nodes)?;
            let atoms = op
                .theta()
                .iter()
                .zip(op.weights())
                .zip(op.h())
                .map(|((t, w), h)| {
                    // w = (h'' + h)/(2h)·dθ is the μ_K weight; undo it to get S_K mass
                    let mass = w * 2.0 * h;
                    Atom { w: Vector::from_f64s(&[t.sin(), -t.cos()]), c: Scalar::float(mass / 4.0) }
                })
                .collect();
            AtomicSphericalMeasure::new(2, Weighting::Length, atoms)?
        }
        _ => {
            let s = mixed_area_measure(&[Slot::try_from(k)?])?;
            if !s.is_even() {
                return Err(Error::Precondition("body is not centrally symmetric".into()));
            }
            let quarter = Scalar::ratio(1, 4);
            let atoms = s.atoms().iter().map(|a| Atom { w: rotate_clockwise(&a.w), c: &a.c * &quarter }).collect();
            AtomicSphericalMeasure::new(2, Weighting::Length, atoms)?
        }
    };
    let exact = k.backend() == Backend::Exact && !matches!(k, Body::Smooth(_));
    let mut max_error = if exact { Scalar::zero() } else { Scalar::float(0.0) };
    for j in 0..100 {
        let x = if exact {
            Vector::from_ints(&[(j % 10) - 4, (j / 10) - 5])
        } else {
            let t = 2.0 * PI * j as f64 / 100.0;
            Vector::from_f64s(&[t.cos(), t.sin()])
        };
        if x.is_zero() {
            continue;
        }
        let err = (&generating_support(&eta, &x)? - &k.support(&x)?).abs();
        max_error = max_error.max(err);
    }
    Ok(GeneratingMeasure { eta, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{SmoothBody, Zonotope};

    #[test]
    fn square_has_unit_mass_per_axis() {
        let g = planar_generating_measure(&Body::Zonotope(Zonotope::cube(2)), 0).unwrap();
        assert_eq!(g.max_error, Scalar::zero());
        assert_eq!(g.eta.len(), 4);
        assert!(g.eta.atoms().iter().all(|a| a.c == Scalar::ratio(1, 2)));
        let x = Vector::from_ints(&[3, -5]);
        assert_eq!(generating_support(&g.eta, &x).unwrap(), Scalar::int(8));
    }

    #[test]
    fn hexagon_has_three_directions() {
        let one = Scalar::one();
        let z = Zonotope::from_int_generators(2, &[(&[1, 0], one.clone()), (&[0, 1], one.clone()), (&[1, 1], one)])
            .unwrap();
        let g = planar_generating_measure(&Body::Zonotope(z), 0).unwrap();
        assert_eq!(g.eta.len(), 6);
        assert_eq!(g.max_error, Scalar::zero());
    }

    #[test]
    fn circle_is_uniform() {
        let g = planar_generating_measure(&Body::Smooth(SmoothBody::ball(2)), 2048).unwrap();
        assert!(g.max_error.to_f64() < 1e-5);
        let c0 = g.eta.atoms()[0].c.to_f64();
        assert!(g.eta.atoms().iter().all(|a| (a.c.to_f64() - c0).abs() < 1e-12));
        assert!((c0 * 2048.0 - PI / 2.0).abs() < 1e-9);
    }
}
