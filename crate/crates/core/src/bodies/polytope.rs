use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::arith::{det, generalized_cross, line_direction, rank, Backend, Direction, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

const BRUTE_FORCE_VERTEX_LIMIT: usize = 200;

/// An origin-symmetric polytope `conv{±v_i}`, stored as one representative
/// per antipodal pair. Representatives need not all be vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricPolytope {
    dim: usize,
    vertices: Vec<Vector>,
}

/// A facet of a symmetric polytope: outward primitive normal, the offset
/// `h_P(normal)`, and the incident points as indices into
/// [`SymmetricPolytope::all_points`].
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vector,
    pub offset: Scalar,
    pub points: Vec<usize>,
}

impl SymmetricPolytope {
    /// Drops zero points and duplicate ± pairs.
    pub fn new(dim: usize, points: Vec<Vector>) -> Result<Self> {
        let mut vertices: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            check_dim(dim, p.dim())?;
            if p.is_zero() {
                continue;
            }
            let neg = -&p;
            if vertices.iter().any(|v| *v == p || *v == neg) {
                continue;
            }
            vertices.push(p);
        }
        Ok(SymmetricPolytope { dim, vertices })
    }

    /// `conv{±e_i}`.
    pub fn cross_polytope(dim: usize) -> Self {
        SymmetricPolytope { dim, vertices: (0..dim).map(|i| Vector::unit(dim, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn backend(&self) -> Backend {
        if self.vertices.iter().all(Vector::is_exact) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Self> {
        let vs = self.vertices.iter().map(|v| v.to_backend(backend)).collect::<Result<_>>()?;
        SymmetricPolytope::new(self.dim, vs)
    }

    /// Representatives followed by their negatives: index `i < k` is `v_i`,
    /// index `k + i` is `-v_i`.
    pub fn all_points(&self) -> Vec<Vector> {
        let mut pts = self.vertices.clone();
        pts.extend(self.vertices.iter().map(|v| -v));
        pts
    }

    pub fn is_full_dimensional(&self) -> bool {
        rank(&self.vertices) == self.dim
    }

    /// `h(x) = max_i |⟨v_i, x⟩|`.
    pub fn support(&self, x: &Vector) -> Result<Scalar> {
        check_dim(self.dim, x.dim())?;
        Ok(self.support_unchecked(x))
    }

    pub(crate) fn support_unchecked(&self, x: &Vector) -> Scalar {
        self.vertices
            .iter()
            .map(|v| v.dot(x).abs())
            .reduce(|a, b| if b > a { b } else { a })
            .unwrap_or_else(Scalar::zero)
    }

    pub fn scaled(&self, s: &Scalar) -> Result<Self> {
        if s.is_negative() {
            return Err(Error::Precondition("scale factor must be nonnegative".into()));
        }
        SymmetricPolytope::new(self.dim, self.vertices.iter().map(|v| v.scale(s)).collect())
    }

    /// Brute-force facet enumeration over `n`-subsets of `±v_i`.
    ///
    /// Float input is converted to its exact binary value first, so the
    /// combinatorics are always decided exactly.
    pub fn hull_facets(&self) -> Result<Vec<Facet>> {
        let exact = self.to_backend(Backend::Exact)?;
        exact.hull_facets_exact()
    }

    fn hull_facets_exact(&self) -> Result<Vec<Facet>> {
        let n = self.dim;
        let k = self.vertices.len();
        if k > BRUTE_FORCE_VERTEX_LIMIT && n > 4 {
            return Err(Error::Unsupported(format!(
                "{k} vertex pairs in dimension {n} is beyond brute-force facet enumeration"
            )));
        }
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate("polytope is not full-dimensional".into()));
        }
        let pts = self.all_points();
        let fpts: Vec<Vec<f64>> = pts.iter().map(Vector::to_f64s).collect();
        let scale = fpts.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);

        let mut found: BTreeMap<Direction, Facet> = BTreeMap::new();
        let mut covered: Vec<BTreeSet<usize>> = Vec::new();
        for combo in (0..2 * k).combinations(n) {
            // a facet of a symmetric body never contains an antipodal pair;
            // each ± facet pair is found through the member containing the
            // lowest-indexed representative
            if combo[0] >= k || has_antipodes(&combo, k) {
                continue;
            }
            if covered.iter().any(|s| combo.iter().all(|i| s.contains(i))) {
                continue;
            }
            if !float_candidate(&fpts, &combo, scale) {
                continue;
            }
            let base = &pts[combo[0]];
            let diffs: Vec<Vector> = combo[1..].iter().map(|&i| &pts[i] - base).collect();
            let w = generalized_cross(&diffs);
            let mut offset = w.dot(base);
            if offset.is_zero() {
                continue;
            }
            let (dir, _) = line_direction(&w).expect("nonzero exact normal");
            let mut normal = dir.to_vector();
            offset = normal.dot(base);
            if offset.is_negative() {
                normal = -&normal;
                offset = -offset;
            }
            let mut incident = Vec::new();
            let mut supporting = true;
            for (i, p) in pts.iter().enumerate() {
                let ip = normal.dot(p);
                if ip > offset {
                    supporting = false;
                    break;
                }
                if ip == offset {
                    incident.push(i);
                }
            }
            if !supporting {
                continue;
            }
            covered.push(incident.iter().copied().collect());
            let key = line_direction(&normal).expect("nonzero").0;
            found.entry(key).or_insert(Facet { normal, offset, points: incident });
        }

        let mut facets = Vec::with_capacity(2 * found.len());
        for f in found.into_values() {
            let anti = Facet {
                normal: -&f.normal,
                offset: f.offset.clone(),
                points: f.points.iter().map(|&i| (i + k) % (2 * k)).sorted().collect(),
            };
            facets.push(f);
            facets.push(anti);
        }
        Ok(facets)
    }

    /// Indices (into [`Self::vertices`]) of representatives that are vertices.
    pub fn extreme_indices(&self) -> Result<Vec<usize>> {
        let facets = self.hull_facets()?;
        let k = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..k {
            let normals: Vec<Vector> = facets
                .iter()
                .filter(|f| f.points.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            if rank(&normals) == self.dim {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// The same polytope with non-vertex representatives removed.
    pub fn reduced(&self) -> Result<SymmetricPolytope> {
        let keep = self.extreme_indices()?;
        SymmetricPolytope::new(self.dim, keep.into_iter().map(|i| self.vertices[i].clone()).collect())
    }

    /// Exact volume: each facet is triangulated by recursive pulling and
    /// coned to the origin.
    pub fn volume(&self) -> Result<Scalar> {
        let facets = self.hull_facets()?;
        let pts = self.to_backend(Backend::Exact)?.all_points();
        let facet_sets: Vec<BTreeSet<usize>> =
            facets.iter().map(|f| f.points.iter().copied().collect()).collect();
        // facets come in antipodal pairs with equal cone volumes
        let half: Vec<BTreeSet<usize>> = facet_sets.iter().step_by(2).cloned().collect();
        let vol = cone_volume(&pts, &half, &facet_sets, self.dim) * Scalar::int(2);
        vol.to_backend(self.backend())
    }
}

/// `Σ |det(simplex)| / n!` over pulling triangulations of the faces in
/// `cone_faces`, each coned to the origin. `all_facets` supplies the face
/// lattice; sets of lower affine dimension are tolerated and ignored.
pub(crate) fn cone_volume(
    pts: &[Vector],
    cone_faces: &[BTreeSet<usize>],
    all_facets: &[BTreeSet<usize>],
    n: usize,
) -> Scalar {
    let mut total = Scalar::zero();
    for simplex in cone_simplices(pts, cone_faces, all_facets, n) {
        let rows: Vec<Vector> = simplex.iter().map(|&i| pts[i].clone()).collect();
        total += det(&rows).abs();
    }
    let fact: i64 = (1..=n as i64).product();
    total / Scalar::int(fact)
}

/// The simplices (as point-index lists, apex at the origin implied) of the
/// triangulation used by [`cone_volume`].
pub(crate) fn cone_simplices(
    pts: &[Vector],
    cone_faces: &[BTreeSet<usize>],
    all_facets: &[BTreeSet<usize>],
    n: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for f in cone_faces {
        if f.len() < n || !seen.insert(f.clone()) || affine_dim(f, pts) != n - 1 {
            continue;
        }
        out.extend(triangulate_face(f, n - 1, all_facets, pts));
    }
    out
}

/// Float generalized cross product (cofactors along a missing last row).
pub(crate) fn cross_f64(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len() + 1;
    (0..n)
        .map(|col| {
            let minor = nalgebra::DMatrix::from_fn(n - 1, n - 1, |r, c| rows[r][if c < col { c } else { c + 1 }]);
            let d = minor.determinant();
            if (n + col + 1).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn has_antipodes(combo: &[usize], k: usize) -> bool {
    combo.iter().any(|&i| i < k && combo.contains(&(i + k)))
}

/// Cheap float rejection of subsets whose hyperplane clearly cuts the
/// point set. Returns `true` when the exact test is still needed.
fn float_candidate(fpts: &[Vec<f64>], combo: &[usize], scale: f64) -> bool {
    let base = &fpts[combo[0]];
    let diffs: Vec<Vec<f64>> = combo[1..]
        .iter()
        .map(|&i| fpts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let w = cross_f64(&diffs);
    let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if wn == 0.0 {
        // possibly tiny but nonzero: let the exact path decide
        return true;
    }
    let dot = |p: &[f64]| p.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
    let off = dot(base);
    let tol = 1e-9 * wn * scale;
    if off.abs() <= tol {
        return true;
    }
    let sign = off.signum();
    fpts.iter().all(|p| sign * (dot(p) - off) <= tol)
}

fn affine_dim(set: &BTreeSet<usize>, pts: &[Vector]) -> usize {
    let mut it = set.iter();
    let Some(&first) = it.next() else { return 0 };
    let diffs: Vec<Vector> = it.map(|&i| &pts[i] - &pts[first]).collect();
    rank(&diffs)
}

/// Pulling triangulation of a face with vertex set `face` and dimension `d`.
/// Subfaces are the maximal intersections with facets.
fn triangulate_face(
    face: &BTreeSet<usize>,
    d: usize,
    facets: &[BTreeSet<usize>],
    pts: &[Vector],
) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![*face.iter().next().expect("nonempty face")]];
    }
    if face.len() == d + 1 {
        return vec![face.iter().copied().collect()];
    }
    let apex = *face.iter().next().expect("nonempty face");
    let mut subfaces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for f in facets {
        let inter: BTreeSet<usize> = face.intersection(f).copied().collect();
        if inter.len() < d || inter.len() == face.len() || inter.contains(&apex) {
            continue;
        }
        if affine_dim(&inter, pts) == d - 1 {
            subfaces.insert(inter);
        }
    }
    let mut out = Vec::new();
    for sub in subfaces {
        for mut s in triangulate_face(&sub, d - 1, facets, pts) {
            s.push(apex);
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Zonotope;

    #[test]
    fn cross_polytope_facets_and_volume() {
        let p = SymmetricPolytope::cross_polytope(3);
        let facets = p.hull_facets().unwrap();
        assert_eq!(facets.len(), 8);
        for f in &facets {
            assert!(f.normal.iter().all(|c| c.abs() == Scalar::one()));
            assert_eq!(f.offset, Scalar::one());
        }
        assert_eq!(p.volume().unwrap(), Scalar::ratio(4, 3));
        assert_eq!(p.support(&Vector::from_ints(&[1, 2, 3])).unwrap(), Scalar::int(3));
    }

    #[test]
    fn cube_as_polytope() {
        let p = Zonotope::cube(3).to_polytope().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.hull_facets().unwrap().len(), 6);
        assert_eq!(p.volume().unwrap(), Scalar::int(8));
    }

    #[test]
    fn interior_points_are_dropped_by_reduce() {
        let mut vs: Vec<Vector> = (0..3).map(|i| Vector::unit(3, i)).collect();
        vs.push(Vector::new(vec![Scalar::ratio(1, 4), Scalar::ratio(1, 4), Scalar::zero()]));
        let p = SymmetricPolytope::new(3, vs).unwrap();
        assert_eq!(p.reduced().unwrap(), SymmetricPolytope::cross_polytope(3));
        assert_eq!(p.volume().unwrap(), Scalar::ratio(4, 3));
    }

    #[test]
    fn degenerate_polytope_is_reported() {
        let p = SymmetricPolytope::new(3, vec![Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])])
            .unwrap();
        assert!(matches!(p.hull_facets(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn planar_and_four_dimensional_volumes() {
        assert_eq!(SymmetricPolytope::cross_polytope(2).volume().unwrap(), Scalar::int(2));
        assert_eq!(SymmetricPolytope::cross_polytope(4).volume().unwrap(), Scalar::ratio(2, 3));
        let c4 = Zonotope::cube(4).to_polytope().unwrap();
        assert_eq!(c4.volume().unwrap(), Scalar::int(16));
    }
}
