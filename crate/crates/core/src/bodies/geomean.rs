use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{det, exact_nth_root, line_direction, nth_root_bounds, rank, Backend, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

use super::polytope::cone_simplices;
use super::Body;

const MAX_T_DENOMINATOR: u64 = 1024;
const ROOT_BITS: u32 = 64;
const SAMPLE_RANGE: i64 = 6;

/// Outer and inner approximations of the geometric mean `K^{1-t} L^t`,
/// cut out by a finite direction set.
#[derive(Clone, Debug)]
pub struct GeoMeanBody {
    k: Body,
    l: Body,
    t: BigRational,
    directions: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoMeanBounds {
    pub lower: Scalar,
    pub upper: Scalar,
    /// Whether every sampled right-hand side `h_K^{1-t} h_L^t` was rational.
    pub upper_exact: bool,
    pub directions: usize,
    pub outer_vertices: usize,
}

impl GeoMeanBody {
    pub fn new(k: &Body, l: &Body, t: &Scalar, directions: Vec<Vector>) -> Result<Self> {
        let n = k.dim();
        check_dim(n, l.dim())?;
        if n > 4 {
            return Err(Error::Unsupported("geometric-mean bounds need n <= 4".into()));
        }
        let k = exact_body(k)?;
        let l = exact_body(l)?;
        if !k.is_full_dimensional() || !l.is_full_dimensional() {
            return Err(Error::Degenerate("geometric mean needs full-dimensional bodies".into()));
        }
        let t = t
            .to_exact()?
            .as_rational()
            .cloned()
            .expect("exact after conversion");
        if t.is_negative() || t > BigRational::one() {
            return Err(Error::Precondition(format!("t must lie in [0, 1], got {t}")));
        }
        if t.denom() > &BigInt::from(MAX_T_DENOMINATOR) {
            return Err(Error::Unsupported(format!(
                "t must be a rational with denominator at most {MAX_T_DENOMINATOR}"
            )));
        }
        let mut dirs: BTreeMap<_, Vector> = BTreeMap::new();
        for d in directions {
            check_dim(n, d.dim())?;
            let d = d.to_backend(Backend::Exact)?;
            if let Some((key, _)) = line_direction(&d) {
                dirs.entry(key.clone()).or_insert_with(|| key.to_vector());
            }
        }
        Ok(GeoMeanBody { k, l, t, directions: dirs.into_values().collect() })
    }

    /// Facet normals of both bodies plus `budget` random primitive integer
    /// directions.
    pub fn with_sampled_directions(
        k: &Body,
        l: &Body,
        t: &Scalar,
        budget: usize,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let n = k.dim();
        let mut dirs = facets_of(&exact_body(k)?)?.into_iter().map(|(v, _)| v).collect::<Vec<_>>();
        dirs.extend(facets_of(&exact_body(l)?)?.into_iter().map(|(v, _)| v));
        let mut drawn = 0;
        while drawn < budget {
            let v: Vec<i64> = (0..n).map(|_| rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect();
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            dirs.push(Vector::from_ints(&v));
            drawn += 1;
        }
        Self::new(k, l, t, dirs)
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    /// Certified `lower ≤ Vol(K^{1-t} L^t) ≤ upper`.
    ///
    /// The outer body is the H-polytope with right-hand sides rounded up to
    /// rationals. The inner body cones the outer triangulation to the points
    /// `p / (‖p‖_K^{1-t} ‖p‖_L^t)` (denominator rounded up), which lie in
    /// the geometric mean because `⟨p, w⟩ ≤ ‖p‖_K h_K(w)` and
    /// `⟨p, w⟩ ≤ ‖p‖_L h_L(w)`.
    pub fn bounds(&self) -> Result<GeoMeanBounds> {
        let n = self.k.dim();
        if rank(&self.directions) < n {
            return Err(Error::Degenerate(
                "direction set does not span; the sampled intersection is unbounded".into(),
            ));
        }
        let m = self.directions.len();
        let mut rhs = Vec::with_capacity(m);
        let mut upper_exact = true;
        for w in &self.directions {
            let hk = rat(&self.k.support(w)?);
            let hl = rat(&self.l.support(w)?);
            let (g, exact) = weighted_geomean_upper(&hk, &hl, &self.t);
            upper_exact &= exact;
            rhs.push(g);
        }
        // constraints j < m are (w_j, g_j), constraints m + j are (-w_j, g_j)
        let (verts, tight) = enumerate_vertices(&self.directions, &rhs, n)?;
        let pts: Vec<Vector> = verts.iter().map(|v| rat_vector(v)).collect();
        let facet_sets: Vec<BTreeSet<usize>> = tight;
        let simplices = cone_simplices(&pts, &facet_sets, &facet_sets, n);
        let fact = BigRational::from_integer((1..=n as i64).product::<i64>().into());

        let kfac = facets_of(&self.k)?;
        let lfac = facets_of(&self.l)?;
        let shrink: Vec<BigRational> = verts
            .iter()
            .map(|v| {
                let gk = gauge(&kfac, v);
                let gl = gauge(&lfac, v);
                weighted_geomean_upper(&gk, &gl, &self.t).0
            })
            .collect();

        let mut upper = BigRational::zero();
        let mut lower = BigRational::zero();
        for s in &simplices {
            let rows: Vec<Vector> = s.iter().map(|&i| pts[i].clone()).collect();
            let d = rat(&det(&rows)).abs();
            let denom: BigRational = s.iter().map(|&i| shrink[i].clone()).product();
            lower += &d / denom;
            upper += d;
        }
        Ok(GeoMeanBounds {
            lower: Scalar::Exact(lower / &fact),
            upper: Scalar::Exact(upper / &fact),
            upper_exact,
            directions: m,
            outer_vertices: verts.len(),
        })
    }
}

/// Convenience wrapper: bounds from the given directions plus
/// `sample_budget` directions drawn from `rng`.
pub fn geomean_volume_bounds(
    k: &Body,
    l: &Body,
    t: &Scalar,
    directions: &[Vector],
    sample_budget: usize,
    rng: &mut impl Rng,
) -> Result<GeoMeanBounds> {
    let sampled = GeoMeanBody::with_sampled_directions(k, l, t, sample_budget, rng)?;
    let mut all = sampled.directions().to_vec();
    all.extend(directions.iter().cloned());
    GeoMeanBody::new(k, l, t, all)?.bounds()
}

fn exact_body(b: &Body) -> Result<Body> {
    match b {
        Body::Smooth(_) => Err(Error::Unsupported("geometric mean of smooth bodies".into())),
        _ => b.to_backend(Backend::Exact),
    }
}

fn rat(s: &Scalar) -> BigRational {
    s.as_rational().cloned().expect("exact scalar")
}

fn rat_vector(v: &[BigRational]) -> Vector {
    Vector(v.iter().cloned().map(Scalar::Exact).collect())
}

/// Facet normals with support values, one per antipodal pair.
fn facets_of(b: &Body) -> Result<Vec<(Vector, BigRational)>> {
    let normals = match b {
        Body::Zonotope(z) => z.facet_normals()?,
        Body::Polytope(p) => p.hull_facets()?.into_iter().step_by(2).map(|f| f.normal).collect(),
        Body::Smooth(_) => unreachable!("rejected earlier"),
    };
    normals
        .into_iter()
        .map(|v| {
            let h = rat(&b.support(&v)?);
            Ok((v, h))
        })
        .collect()
}

/// The gauge `‖p‖ = max_ν |⟨ν, p⟩| / h(ν)` of a symmetric polytope.
fn gauge(facets: &[(Vector, BigRational)], p: &[BigRational]) -> BigRational {
    facets
        .iter()
        .map(|(nu, h)| {
            let ip: BigRational = nu.iter().zip(p).map(|(a, b)| rat(a) * b).sum();
            ip.abs() / h
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// A rational upper bound for `a^{1-t} b^t` (`a, b ≥ 0`), and whether it is
/// the exact value.
fn weighted_geomean_upper(a: &BigRational, b: &BigRational, t: &BigRational) -> (BigRational, bool) {
    if t.is_zero() || a == b {
        return (a.clone(), true);
    }
    if t.is_one() {
        return (b.clone(), true);
    }
    if a.is_zero() || b.is_zero() {
        return (BigRational::zero(), true);
    }
    let q = t.denom().to_u32().expect("small denominator");
    let p = t.numer().to_u32().expect("small numerator");
    let r = num_traits::pow(a.clone(), (q - p) as usize) * num_traits::pow(b.clone(), p as usize);
    match exact_nth_root(&r, q) {
        Some(root) => (root, true),
        None => (nth_root_bounds(&r, q, ROOT_BITS).1, false),
    }
}

type Vertices = (Vec<Vec<BigRational>>, Vec<BTreeSet<usize>>);

/// Vertices of `{z : |⟨w_j, z⟩| ≤ g_j}` by brute force over `n`-subsets of
/// constraints, with a float prefilter and exact verification. Returns the
/// vertices (both signs) and, per constraint, the incident vertex indices.
fn enumerate_vertices(dirs: &[Vector], rhs: &[BigRational], n: usize) -> Result<Vertices> {
    let m = dirs.len();
    let rows: Vec<Vec<BigRational>> = (0..2 * m)
        .map(|j| {
            let w: Vec<BigRational> = dirs[j % m].iter().map(rat).collect();
            if j < m {
                w
            } else {
                w.into_iter().map(|x| -x).collect()
            }
        })
        .collect();
    let g: Vec<BigRational> = (0..2 * m).map(|j| rhs[j % m].clone()).collect();
    let frows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let fg: Vec<f64> = g.iter().map(to_f64).collect();
    let gmax = fg.iter().fold(0.0f64, |a, &x| a.max(x));

    let mut found: BTreeMap<Vec<BigRational>, BTreeSet<usize>> = BTreeMap::new();
    for combo in (0..2 * m).combinations(n) {
        if combo[0] >= m || combo.iter().any(|&j| j < m && combo.contains(&(j + m))) {
            continue;
        }
        if found.values().any(|s| combo.iter().all(|j| s.contains(j))) {
            continue;
        }
        let a = DMatrix::from_fn(n, n, |r, c| frows[combo[r]][c]);
        let b = DVector::from_iterator(n, combo.iter().map(|&j| fg[j]));
        if let Some(x) = a.clone().lu().solve(&b) {
            let xn = x.norm();
            let tol = 1e-7 * (gmax + xn);
            let feasible = frows
                .iter()
                .zip(&fg)
                .all(|(r, gj)| r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= gj + tol);
            if !feasible {
                continue;
            }
        }
        let Some(x) = solve_exact(&rows, &g, &combo, n) else { continue };
        let mut tight = BTreeSet::new();
        let mut ok = true;
        for (j, r) in rows.iter().enumerate() {
            let v: BigRational = r.iter().zip(&x).map(|(p, q)| p * q).sum();
            if v > g[j] {
                ok = false;
                break;
            }
            if v == g[j] {
                tight.insert(j);
            }
        }
        if ok {
            found.entry(x).or_insert(tight);
        }
    }
    if found.is_empty() {
        return Err(Error::Degenerate("sampled intersection has no vertices".into()));
    }
    let mut verts = Vec::with_capacity(2 * found.len());
    let mut incid: Vec<BTreeSet<usize>> = Vec::new();
    for (v, t) in found {
        let neg: Vec<BigRational> = v.iter().map(|x| -x).collect();
        let tneg: BTreeSet<usize> = t.iter().map(|&j| (j + m) % (2 * m)).collect();
        verts.push(v);
        incid.push(t);
        verts.push(neg);
        incid.push(tneg);
    }
    let mut per_constraint = vec![BTreeSet::new(); 2 * m];
    for (vi, t) in incid.iter().enumerate() {
        for &j in t {
            per_constraint[j].insert(vi);
        }
    }
    Ok((verts, per_constraint))
}

fn solve_exact(rows: &[Vec<BigRational>], g: &[BigRational], combo: &[usize], n: usize) -> Option<Vec<BigRational>> {
    let mat: Vec<Vector> = combo.iter().map(|&j| rat_vector(&rows[j])).collect();
    let d = det(&mat);
    if d.is_zero() {
        return None;
    }
    let d = rat(&d);
    Some(
        (0..n)
            .map(|col| {
                let replaced: Vec<Vector> = combo
                    .iter()
                    .map(|&j| {
                        let mut r = rows[j].clone();
                        r[col] = g[j].clone();
                        rat_vector(&r)
                    })
                    .collect();
                rat(&det(&replaced)) / &d
            })
            .collect(),
    )
}

fn to_f64(r: &BigRational) -> f64 {
    crate::arith::rational_to_f64(r)
}
