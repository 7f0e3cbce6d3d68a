use std::cmp::Reverse;
use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Signed;

use crate::arith::{det, generalized_cross, line_direction, rank, Backend, Direction, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

use super::polytope::SymmetricPolytope;

/// One summand `[-λu, λu]` of a zonotope.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub u: Vector,
    pub lambda: Scalar,
}

impl Generator {
    pub fn new(u: Vector, lambda: Scalar) -> Self {
        Generator { u, lambda }
    }

    /// `λu`, the half-segment endpoint.
    pub fn endpoint(&self) -> Vector {
        self.u.scale(&self.lambda)
    }
}

/// A centered zonotope `Σ [-λ_i u_i, λ_i u_i]`.
///
/// On the exact backend generators are kept in canonical form: each `u` is
/// the sign-normalized primitive integer vector of its line, parallel
/// generators are merged, and the list is sorted by direction. The
/// generators are therefore exactly the atoms of the generating measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Generator>,
}

impl Zonotope {
    pub fn new(dim: usize, generators: Vec<Generator>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.u.dim())?;
            if g.u.is_zero() {
                return Err(Error::Precondition("zonotope generator direction is zero".into()));
            }
            if !g.lambda.is_positive() {
                return Err(Error::Precondition(format!(
                    "zonotope generator weight must be positive, got {}",
                    g.lambda
                )));
            }
        }
        let exact = generators.iter().all(|g| g.u.is_exact() && g.lambda.is_exact());
        let generators = if exact {
            canonicalize(generators)
        } else {
            generators
                .into_iter()
                .map(|g| Generator {
                    u: g.u.to_backend(Backend::Float).expect("float conversion"),
                    lambda: Scalar::float(g.lambda.to_f64()),
                })
                .collect()
        };
        Ok(Zonotope { dim, generators })
    }

    /// The segment `[-λu, λu]`.
    pub fn segment(u: Vector, lambda: Scalar) -> Result<Self> {
        Self::new(u.dim(), vec![Generator::new(u, lambda)])
    }

    /// `[-1, 1]^n`.
    pub fn cube(dim: usize) -> Self {
        Self::boxed(&vec![Scalar::one(); dim]).expect("unit cube")
    }

    /// The box `Π [-a_i, a_i]`.
    pub fn boxed(half_widths: &[Scalar]) -> Result<Self> {
        let dim = half_widths.len();
        let gens = half_widths
            .iter()
            .enumerate()
            .map(|(i, a)| Generator::new(Vector::unit(dim, i), a.clone()))
            .collect();
        Self::new(dim, gens)
    }

    pub fn from_int_generators(dim: usize, gens: &[(&[i64], Scalar)]) -> Result<Self> {
        Self::new(
            dim,
            gens.iter().map(|(u, l)| Generator::new(Vector::from_ints(u), l.clone())).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn backend(&self) -> Backend {
        if self.generators.iter().all(|g| g.u.is_exact() && g.lambda.is_exact()) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Zonotope> {
        let gens = self
            .generators
            .iter()
            .map(|g| Ok(Generator::new(g.u.to_backend(backend)?, g.lambda.to_backend(backend)?)))
            .collect::<Result<Vec<_>>>()?;
        Zonotope::new(self.dim, gens)
    }

    /// Canonical line directions of the generators (exact backend only).
    pub fn directions(&self) -> Option<Vec<Direction>> {
        self.generators.iter().map(|g| line_direction(&g.u).map(|(d, _)| d)).collect()
    }

    pub fn rank(&self) -> usize {
        let us: Vec<Vector> = self.generators.iter().map(|g| g.u.clone()).collect();
        rank(&us)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank() == self.dim
    }

    /// `h(x) = Σ λ_i |⟨u_i, x⟩|`.
    pub fn support(&self, x: &Vector) -> Result<Scalar> {
        check_dim(self.dim, x.dim())?;
        Ok(self.support_unchecked(x))
    }

    pub(crate) fn support_unchecked(&self, x: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for g in &self.generators {
            let ip = g.u.dot(x);
            if !ip.is_zero() {
                acc += &g.lambda * &ip.abs();
            }
        }
        acc
    }

    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Zonotope> {
        check_dim(self.dim, other.dim)?;
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Zonotope::new(self.dim, gens)
    }

    /// `s·Z` for `s ≥ 0`; `s = 0` gives the one-point zonotope `{0}`.
    pub fn scaled(&self, s: &Scalar) -> Result<Zonotope> {
        if s.is_negative() {
            return Err(Error::Precondition("scale factor must be nonnegative".into()));
        }
        if s.is_zero() {
            return Zonotope::new(self.dim, Vec::new());
        }
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.u.clone(), &g.lambda * s))
            .collect();
        Zonotope::new(self.dim, gens)
    }

    /// Sub-zonotope on a subset of generator indices.
    pub fn restrict(&self, indices: &[usize]) -> Result<Zonotope> {
        let gens = indices
            .iter()
            .map(|&i| {
                self.generators
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Precondition(format!("generator index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Zonotope::new(self.dim, gens)
    }

    /// `Vol(Z) = 2^n Σ_{|S| = n} Π_{i∈S} λ_i |det(u_S)|`.
    pub fn volume(&self) -> Scalar {
        let n = self.dim;
        let m = self.generators.len();
        let mut acc = if self.backend() == Backend::Exact {
            Scalar::zero()
        } else {
            Scalar::float(0.0)
        };
        if m < n {
            return acc;
        }
        for combo in (0..m).combinations(n) {
            let rows: Vec<Vector> = combo.iter().map(|&i| self.generators[i].u.clone()).collect();
            let d = det(&rows);
            if d.is_zero() {
                continue;
            }
            let weight: Scalar = combo.iter().map(|&i| self.generators[i].lambda.clone()).product();
            acc += weight * d.abs();
        }
        acc * Scalar::int(1 << n)
    }

    /// One primitive outer normal per antipodal facet pair: the
    /// sign-normalized generalized cross products of independent
    /// `(n-1)`-subsets of generators.
    pub fn facet_normals(&self) -> Result<Vec<Vector>> {
        let z = self.to_backend(Backend::Exact)?;
        let n = self.dim;
        if n == 1 {
            return Ok(vec![Vector::from_ints(&[1])]);
        }
        let mut dirs: BTreeMap<Direction, ()> = BTreeMap::new();
        for combo in (0..z.generators.len()).combinations(n - 1) {
            let rows: Vec<Vector> = combo.iter().map(|&i| z.generators[i].u.clone()).collect();
            let w = generalized_cross(&rows);
            if let Some((d, _)) = line_direction(&w) {
                dirs.insert(d, ());
            }
        }
        Ok(dirs.into_keys().map(|d| d.to_vector()).collect())
    }

    /// Vertex pairs by sign enumeration. Candidate points that are not
    /// vertices are kept out by the hull routines downstream; this is meant
    /// for small generator counts (at most 20).
    pub fn to_polytope(&self) -> Result<SymmetricPolytope> {
        let m = self.generators.len();
        if m > 20 {
            return Err(Error::Unsupported(format!(
                "sign enumeration over {m} generators is too large"
            )));
        }
        if m == 0 {
            return SymmetricPolytope::new(self.dim, Vec::new());
        }
        let ends: Vec<Vector> = self.generators.iter().map(Generator::endpoint).collect();
        // Fix the sign of the first generator: each ± pair is listed once.
        let mut pts = Vec::with_capacity(1 << (m - 1));
        for mask in 0..(1u32 << (m - 1)) {
            let mut p = ends[0].clone();
            for (j, e) in ends.iter().enumerate().skip(1) {
                p = if mask & (1 << (j - 1)) != 0 { &p - e } else { &p + e };
            }
            pts.push(p);
        }
        SymmetricPolytope::new(self.dim, pts)
    }
}

/// Merges parallel generators; directions are listed in descending order so
/// coordinate axes come out as `e_1, e_2, …`.
fn canonicalize(generators: Vec<Generator>) -> Vec<Generator> {
    let mut merged: BTreeMap<Reverse<Direction>, Scalar> = BTreeMap::new();
    for g in generators {
        let (dir, s) = line_direction(&g.u).expect("nonzero exact generator");
        let w = &g.lambda * &Scalar::Exact(s.abs());
        *merged.entry(Reverse(dir)).or_insert_with(Scalar::zero) += w;
    }
    merged
        .into_iter()
        .map(|(Reverse(dir), lambda)| Generator::new(dir.to_vector(), lambda))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_parallel_generators() {
        let z = Zonotope::from_int_generators(
            2,
            &[(&[2, 0], Scalar::one()), (&[-1, 0], Scalar::int(3)), (&[0, 1], Scalar::one())],
        )
        .unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z.generators()[0].u, Vector::from_ints(&[1, 0]));
        assert_eq!(z.generators()[0].lambda, Scalar::int(5));
    }

    #[test]
    fn cube_support_and_volume() {
        let c = Zonotope::cube(3);
        assert_eq!(c.support(&Vector::from_ints(&[1, 1, 1])).unwrap(), Scalar::int(3));
        assert_eq!(c.volume(), Scalar::int(8));
        assert!(c.is_full_dimensional());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Zonotope::from_int_generators(2, &[(&[0, 0], Scalar::one())]).is_err());
        assert!(Zonotope::from_int_generators(2, &[(&[1, 0], Scalar::int(-1))]).is_err());
        assert!(Zonotope::from_int_generators(2, &[(&[1, 0, 0], Scalar::one())]).is_err());
    }
}
