use itertools::Itertools;
use serde::Serialize;

use crate::arith::{exact_sqrt, gram_det, Scalar, Vector};
use crate::bodies::Zonotope;
use crate::error::{check_dim, Error, Result};

use super::engine::{mixed_volume, Slot};

/// Both sides of the projection identity, each multiplied by `|u|` so that
/// they stay rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    /// `(n/2)·𝖵([-u,u], C_1, …, C_{n-1})`, from the `n`-dimensional engine.
    pub lhs: Scalar,
    /// `|u|·𝖵_{n-1}(P_{u⊥}C_1, …)`, computed intrinsically in `u⊥`.
    pub rhs: Scalar,
    pub equal: bool,
}

/// Checks `(n/2) 𝖵([-u,u], C_1, …, C_{n-1}) = |u| 𝖵(P_{u⊥}C_1, …, P_{u⊥}C_{n-1})`.
///
/// The right side uses the all-segment formula inside `u⊥`: for projected
/// generators `Pw_i` the `(n-1)`-volume is `sqrt(Gram(Pw))`, and
/// `|u|²·Gram(Pw)` is a perfect square.
pub fn projection_identity_check(u: &Vector, slots: &[Zonotope]) -> Result<ProjectionReport> {
    let n = u.dim();
    if u.is_zero() {
        return Err(Error::Precondition("projection direction u is zero".into()));
    }
    if !u.is_exact() {
        return Err(Error::Unsupported("projection identity check needs the exact backend".into()));
    }
    if slots.len() + 1 != n {
        return Err(Error::Precondition(format!("expected {} slots, got {}", n - 1, slots.len())));
    }
    for z in slots {
        check_dim(n, z.dim())?;
        if !z.generators().iter().all(|g| g.u.is_exact() && g.lambda.is_exact()) {
            return Err(Error::Unsupported("projection identity check needs the exact backend".into()));
        }
    }

    let mut full = vec![Slot::segment(u.clone(), Scalar::one())?];
    full.extend(slots.iter().cloned().map(Slot::Zonotope));
    let lhs = mixed_volume(&full)? * Scalar::int(n as i64) / Scalar::int(2);

    let uu = u.norm_sq();
    let project = |w: &Vector| -> Vector { w - &u.scale(&(w.dot(u) / uu.clone())) };
    let coef = Scalar::int(1 << (n - 1)) / Scalar::int((1..n as i64).product());
    let mut rhs = Scalar::zero();
    for choice in slots.iter().map(|z| z.generators().iter()).multi_cartesian_product() {
        let pw: Vec<Vector> = choice.iter().map(|g| project(&g.u)).collect();
        let g2 = &uu * &gram_det(&pw);
        if g2.is_zero() {
            continue;
        }
        let root = exact_sqrt(g2.as_rational().expect("exact")).ok_or_else(|| {
            Error::Numerical("|u|² times a projected Gram determinant is not a square".into())
        })?;
        let weight: Scalar = choice.iter().map(|g| g.lambda.clone()).product();
        rhs += &(&coef * &weight) * &Scalar::Exact(root);
    }
    let equal = lhs == rhs;
    Ok(ProjectionReport { lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_onto_coordinate_plane() {
        let k = Zonotope::cube(3);
        let r = projection_identity_check(&Vector::unit(3, 2), &[k.clone(), k]).unwrap();
        assert_eq!(r.lhs, Scalar::int(4));
        assert_eq!(r.rhs, Scalar::int(4));
        assert!(r.equal);
    }

    #[test]
    fn projection_along_the_only_generator_vanishes() {
        let z = Zonotope::segment(Vector::from_ints(&[1, 1, 0]), Scalar::int(2)).unwrap();
        let r = projection_identity_check(&Vector::from_ints(&[1, 1, 0]), &[z.clone(), z]).unwrap();
        assert_eq!(r.lhs, Scalar::zero());
        assert_eq!(r.rhs, Scalar::zero());
    }

    #[test]
    fn zero_direction_is_rejected() {
        let k = Zonotope::cube(2);
        assert!(projection_identity_check(&Vector::zeros(2), &[k]).is_err());
    }
}
