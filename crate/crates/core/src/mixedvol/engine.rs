use itertools::Itertools;
use rayon::prelude::*;

use crate::arith::{det, generalized_cross, orthogonal_complement, rank, Scalar, Vector};
use crate::bodies::{Body, SymmetricPolytope, Zonotope};
use crate::error::{check_dim, Error, Result};

use super::measure::{Atom, AtomicSphericalMeasure, Weighting};

/// Tuples are mapped in parallel above this count.
const PAR_THRESHOLD: usize = 512;

/// One argument of a mixed volume or mixed area measure. Segments are
/// one-generator zonotopes.
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Zonotope(Zonotope),
    Polytope(SymmetricPolytope),
}

impl Slot {
    pub fn segment(u: Vector, lambda: Scalar) -> Result<Slot> {
        Ok(Slot::Zonotope(Zonotope::segment(u, lambda)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Slot::Zonotope(z) => z.dim(),
            Slot::Polytope(p) => p.dim(),
        }
    }

    pub fn support(&self, x: &Vector) -> Result<Scalar> {
        match self {
            Slot::Zonotope(z) => z.support(x),
            Slot::Polytope(p) => p.support(x),
        }
    }
}

impl TryFrom<&Body> for Slot {
    type Error = Error;
    fn try_from(b: &Body) -> Result<Slot> {
        match b {
            Body::Zonotope(z) => Ok(Slot::Zonotope(z.clone())),
            Body::Polytope(p) => Ok(Slot::Polytope(p.clone())),
            Body::Smooth(_) => Err(Error::Unsupported(
                "smooth bodies have no atomic mixed area measure".into(),
            )),
        }
    }
}

impl From<Zonotope> for Slot {
    fn from(z: Zonotope) -> Self {
        Slot::Zonotope(z)
    }
}

impl From<SymmetricPolytope> for Slot {
    fn from(p: SymmetricPolytope) -> Self {
        Slot::Polytope(p)
    }
}

fn common_dim(slots: &[Slot]) -> Result<usize> {
    let n = slots.first().map(Slot::dim).ok_or_else(|| Error::Precondition("empty slot list".into()))?;
    for s in slots {
        check_dim(n, s.dim())?;
    }
    Ok(n)
}

fn factorial(k: usize) -> Scalar {
    Scalar::int((1..=k as i64).product())
}

fn pow2(k: usize) -> Scalar {
    Scalar::int(1i64 << k)
}

/// Groups identical zonotope slots: `(zonotope, multiplicity)`.
fn group_zonotopes(zs: &[&Zonotope]) -> Vec<(Zonotope, usize)> {
    let mut groups: Vec<(Zonotope, usize)> = Vec::new();
    for z in zs {
        match groups.iter_mut().find(|(g, _)| g == *z) {
            Some((_, k)) => *k += 1,
            None => groups.push(((*z).clone(), 1)),
        }
    }
    groups
}

/// Every choice of one generator per slot, up to reordering within groups of
/// identical slots: `(generator vectors, Π λ, multiplicity)`. Choices that
/// repeat a generator inside a group are dependent and skipped.
fn generator_tuples(groups: &[(Zonotope, usize)]) -> Vec<(Vec<Vector>, Scalar, Scalar)> {
    let per_group: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .map(|(z, k)| (0..z.len()).combinations(*k).collect())
        .collect();
    let mult: Scalar = groups.iter().map(|(_, k)| factorial(*k)).product();
    let mut out = Vec::new();
    for choice in per_group.iter().map(|v| v.iter()).multi_cartesian_product() {
        let mut us = Vec::new();
        let mut weight = Scalar::one();
        for ((z, _), idx) in groups.iter().zip(&choice) {
            for &i in idx.iter() {
                let g = &z.generators()[i];
                us.push(g.u.clone());
                weight = &weight * &g.lambda;
            }
        }
        out.push((us, weight, mult.clone()));
    }
    // older itertools yield nothing for an empty product
    if groups.is_empty() && out.is_empty() {
        out.push((Vec::new(), Scalar::one(), Scalar::one()));
    }
    out
}

fn map_tuples<T, F>(tuples: &[(Vec<Vector>, Scalar, Scalar)], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&(Vec<Vector>, Scalar, Scalar)) -> Vec<T> + Sync + Send,
{
    if tuples.len() >= PAR_THRESHOLD {
        tuples.par_iter().flat_map_iter(&f).collect()
    } else {
        tuples.iter().flat_map(f).collect()
    }
}

/// `S_{slots}` for `n - 1` slots with at most one polytope.
pub fn mixed_area_measure(slots: &[Slot]) -> Result<AtomicSphericalMeasure> {
    let n = common_dim(slots)?;
    if slots.len() + 1 != n {
        return Err(Error::Precondition(format!(
            "a mixed area measure in dimension {n} takes {} slots, got {}",
            n - 1,
            slots.len()
        )));
    }
    let polys: Vec<&SymmetricPolytope> = slots
        .iter()
        .filter_map(|s| match s {
            Slot::Polytope(p) => Some(p),
            _ => None,
        })
        .collect();
    let zons: Vec<&Zonotope> = slots
        .iter()
        .filter_map(|s| match s {
            Slot::Zonotope(z) => Some(z),
            _ => None,
        })
        .collect();
    match polys.len() {
        0 => Ok(zonotope_area_measure(n, &zons)),
        1 => one_polytope_area_measure(n, polys[0], &zons),
        k => Err(Error::Unsupported(format!(
            "mixed area measures with {k} polytope slots are not supported (at most one)"
        ))),
    }
}

fn zonotope_area_measure(n: usize, zons: &[&Zonotope]) -> AtomicSphericalMeasure {
    let coef = pow2(n - 1) / factorial(n - 1);
    let tuples = generator_tuples(&group_zonotopes(zons));
    let atoms = map_tuples(&tuples, |(us, weight, mult)| {
        let w = generalized_cross(us);
        if w.is_zero() {
            return Vec::new();
        }
        let c = &(&coef * weight) * mult;
        vec![Atom { w: -&w, c: c.clone() }, Atom { w, c }]
    });
    AtomicSphericalMeasure::canonical(n, Weighting::Length, atoms)
}

fn one_polytope_area_measure(
    n: usize,
    p: &SymmetricPolytope,
    zons: &[&Zonotope],
) -> Result<AtomicSphericalMeasure> {
    let coef = pow2(n - 2) / factorial(n - 1);
    let tuples = generator_tuples(&group_zonotopes(zons));
    let points = p.all_points();
    let atoms = map_tuples(&tuples, |(us, weight, mult)| {
        if rank(us) != n - 2 {
            return Vec::new();
        }
        let basis = orthogonal_complement(us, n);
        debug_assert_eq!(basis.len(), 2);
        let coords: Vec<(Scalar, Scalar)> =
            points.iter().map(|x| (basis[0].dot(x), basis[1].dot(x))).collect();
        let hull = planar_hull(&coords);
        let c = &(&coef * weight) * mult;
        let edge_normal = |a: usize, b: usize| {
            let mut rows = us.clone();
            rows.push(&points[a] - &points[b]);
            generalized_cross(&rows)
        };
        match hull.len() {
            0 | 1 => Vec::new(),
            2 => {
                // segment: two sides of opposite normal, each of full length
                let w = edge_normal(hull[0], hull[1]);
                if w.is_zero() {
                    return Vec::new();
                }
                vec![Atom { w: -&w, c: c.clone() }, Atom { w, c }]
            }
            h => (0..h)
                .map(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % h]);
                    let mut w = edge_normal(a, b);
                    if w.dot(&points[a]).is_negative() {
                        w = -&w;
                    }
                    Atom { w, c: c.clone() }
                })
                .collect(),
        }
    });
    Ok(AtomicSphericalMeasure::canonical(n, Weighting::Length, atoms))
}

/// Exact monotone-chain hull of planar points; returns indices of the
/// strictly convex vertices in counterclockwise order.
pub(crate) fn planar_hull(pts: &[(Scalar, Scalar)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a].0.total_cmp(&pts[b].0).then_with(|| pts[a].1.total_cmp(&pts[b].1))
    });
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (ox, oy) = &pts[o];
        let (ax, ay) = &pts[a];
        let (bx, by) = &pts[b];
        (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !cross(lower[lower.len() - 2], lower[lower.len() - 1], i).is_positive() {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !cross(upper[upper.len() - 2], upper[upper.len() - 1], i).is_positive() {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// `𝖵(slots)` for `n` slots with at most two polytopes.
///
/// With no polytope the determinant formula is used; otherwise one polytope
/// is taken as the integrand against the area measure of the others.
pub fn mixed_volume(slots: &[Slot]) -> Result<Scalar> {
    let n = common_dim(slots)?;
    if slots.len() != n {
        return Err(Error::Precondition(format!(
            "a mixed volume in dimension {n} takes {n} slots, got {}",
            slots.len()
        )));
    }
    let poly_pos: Vec<usize> =
        slots.iter().positions(|s| matches!(s, Slot::Polytope(_))).collect();
    if poly_pos.len() > 2 {
        return Err(Error::Unsupported(format!(
            "mixed volumes with {} polytope slots are not supported (at most two)",
            poly_pos.len()
        )));
    }
    if poly_pos.is_empty() {
        let zons: Vec<&Zonotope> = slots
            .iter()
            .map(|s| match s {
                Slot::Zonotope(z) => z,
                Slot::Polytope(_) => unreachable!(),
            })
            .collect();
        return Ok(zonotope_mixed_volume(n, &zons));
    }
    let integrand_at = poly_pos[0];
    let rest: Vec<Slot> = slots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != integrand_at)
        .map(|(_, s)| s.clone())
        .collect();
    let s = mixed_area_measure(&rest)?;
    let integrand = &slots[integrand_at];
    let total = s.integrate_homogeneous(|w| integrand.support(w))?;
    Ok(total / Scalar::int(n as i64))
}

fn zonotope_mixed_volume(n: usize, zons: &[&Zonotope]) -> Scalar {
    let coef = pow2(n) / factorial(n);
    let tuples = generator_tuples(&group_zonotopes(zons));
    let terms = map_tuples(&tuples, |(us, weight, mult)| {
        let d = det(us);
        if d.is_zero() {
            Vec::new()
        } else {
            vec![&(weight * &d.abs()) * mult]
        }
    });
    let zero = if zons.iter().all(|z| z.backend() == crate::arith::Backend::Exact) {
        Scalar::zero()
    } else {
        Scalar::float(0.0)
    };
    terms.into_iter().fold(zero, |a, b| a + b) * coef
}

/// `S_{K,…,K}` (`n - 1` copies).
pub fn surface_area_measure(k: &Zonotope) -> Result<AtomicSphericalMeasure> {
    let n = k.dim();
    if n < 2 {
        return Err(Error::Precondition("area measures need n >= 2".into()));
    }
    mixed_area_measure(&vec![Slot::Zonotope(k.clone()); n - 1])
}

/// The cone volume measure `(1/n) h_K dS_{K,…,K}` with absolute weights.
pub fn cone_volume_measure(k: &Zonotope) -> Result<AtomicSphericalMeasure> {
    if !k.is_full_dimensional() {
        return Err(Error::Precondition(
            "cone volume measure needs a full-dimensional zonotope".into(),
        ));
    }
    let n = Scalar::int(k.dim() as i64);
    surface_area_measure(k)?.times_homogeneous(|w| Ok(k.support(w)? / n.clone()))
}
