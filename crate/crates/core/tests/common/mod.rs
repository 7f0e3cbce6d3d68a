//! Test-side oracles that share no code with the engine: an exact
//! incremental 3D convex hull on scaled integer points, hull volumes, and
//! mixed volumes by fitting the volume polynomial.

#![allow(dead_code)]

use std::collections::HashSet;

use logbm_core::arith::{Scalar, Vector};
use logbm_core::bodies::{Body, Zonotope};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Q = BigRational;
type P = [i128; 3];

pub fn q(s: &Scalar) -> Q {
    s.as_rational().cloned().expect("exact scalar")
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rational points in R³.
#[derive(Clone, Debug)]
pub struct PointSet(pub Vec<[Q; 3]>);

impl PointSet {
    pub fn from_vectors(vs: &[Vector]) -> Self {
        PointSet(vs.iter().map(|v| [q(&v[0]), q(&v[1]), q(&v[2])]).collect())
    }

    /// All `±` sums of the generator endpoints, pruned to hull vertices after
    /// every generator.
    pub fn zonotope(z: &Zonotope) -> Self {
        let mut pts = vec![[Q::zero(), Q::zero(), Q::zero()]];
        for g in z.generators() {
            let e: [Q; 3] = std::array::from_fn(|i| q(&g.u[i]) * q(&g.lambda));
            let mut next = Vec::with_capacity(2 * pts.len());
            for p in &pts {
                next.push(std::array::from_fn(|i| &p[i] + &e[i]));
                next.push(std::array::from_fn(|i| &p[i] - &e[i]));
            }
            pts = PointSet(next).vertices().0;
        }
        PointSet(pts)
    }

    /// `±v` for every listed vertex.
    pub fn symmetric(vs: &[Vector]) -> Self {
        let mut pts = PointSet::from_vectors(vs).0;
        let neg: Vec<[Q; 3]> = pts.iter().map(|p| std::array::from_fn(|i| -p[i].clone())).collect();
        pts.extend(neg);
        PointSet(pts)
    }

    pub fn of_body(b: &Body) -> Self {
        match b {
            Body::Zonotope(z) => PointSet::zonotope(z),
            Body::Polytope(p) => PointSet::symmetric(p.vertices()),
            Body::Smooth(_) => panic!("no point set for smooth bodies"),
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        PointSet(self.0.iter().map(|p| std::array::from_fn(|i| &p[i] * s)).collect())
    }

    pub fn minkowski_sum(&self, other: &PointSet) -> Self {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(std::array::from_fn(|i| &a[i] + &b[i]));
            }
        }
        PointSet(out).vertices()
    }

    /// Hull vertices, or the deduplicated input when the hull is flat.
    pub fn vertices(&self) -> Self {
        let (scaled, _) = self.to_integer();
        match Hull::build(&scaled) {
            Some(h) => {
                let used: HashSet<usize> = h.faces.iter().flatten().copied().collect();
                let mut idx: Vec<usize> = used.into_iter().collect();
                idx.sort_unstable();
                PointSet(idx.into_iter().map(|i| self.0[h.index[i]].clone()).collect())
            }
            None => {
                let mut seen = HashSet::new();
                PointSet(self.0.iter().filter(|p| seen.insert((*p).clone())).cloned().collect())
            }
        }
    }

    /// Points times the common denominator `d`, as `i128`.
    fn to_integer(&self) -> (Vec<P>, BigInt) {
        let d = self
            .0
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let pts = self
            .0
            .iter()
            .map(|p| std::array::from_fn(|i| (p[i].numer() * (&d / p[i].denom())).to_i128().expect("coordinates fit i128")))
            .collect();
        (pts, d)
    }

    pub fn volume(&self) -> Q {
        let (pts, d) = self.to_integer();
        let Some(h) = Hull::build(&pts) else { return Q::zero() };
        let six_vol: i128 = h.faces.iter().map(|f| det3(&h.pts[f[0]], &h.pts[f[1]], &h.pts[f[2]])).sum();
        Q::new(BigInt::from(six_vol), BigInt::from(6) * &d * &d * &d)
    }

    /// `∫ g dS` for a 1-homogeneous `g`: each hull triangle contributes
    /// `½ g((b-a)×(c-a))`.
    pub fn integrate_area(&self, g: impl Fn(&[Q; 3]) -> Q) -> Q {
        let (pts, d) = self.to_integer();
        let h = Hull::build(&pts).expect("full-dimensional body");
        let d2 = Q::from_integer(&d * &d);
        let half = Q::new(BigInt::one(), BigInt::from(2));
        h.faces
            .iter()
            .map(|f| {
                let n = cross(&sub(&h.pts[f[1]], &h.pts[f[0]]), &sub(&h.pts[f[2]], &h.pts[f[0]]));
                let w: [Q; 3] = std::array::from_fn(|i| Q::from_integer(BigInt::from(n[i])) / &d2);
                &half * g(&w)
            })
            .sum()
    }

    pub fn support(&self, x: &[Q; 3]) -> Q {
        self.0
            .iter()
            .map(|p| &p[0] * &x[0] + &p[1] * &x[1] + &p[2] * &x[2])
            .max()
            .expect("non-empty point set")
    }
}

fn sub(a: &P, b: &P) -> P {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &P, b: &P) -> P {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det3(a: &P, b: &P, c: &P) -> i128 {
    let x = cross(b, c);
    a[0] * x[0] + a[1] * x[1] + a[2] * x[2]
}

fn orient(a: &P, b: &P, c: &P, p: &P) -> i128 {
    det3(&sub(b, a), &sub(c, a), &sub(p, a))
}

/// Triangulated boundary with outward orientation.
struct Hull {
    pts: Vec<P>,
    /// Position in the caller's list of each deduplicated point.
    index: Vec<usize>,
    faces: Vec<[usize; 3]>,
}

impl Hull {
    fn build(input: &[P]) -> Option<Hull> {
        let mut seen = HashSet::new();
        let mut pts = Vec::new();
        let mut index = Vec::new();
        for (i, p) in input.iter().enumerate() {
            if seen.insert(*p) {
                pts.push(*p);
                index.push(i);
            }
        }
        let i0 = 0;
        let i1 = (1..pts.len()).find(|&i| pts[i] != pts[i0])?;
        let i2 = (0..pts.len()).find(|&i| cross(&sub(&pts[i1], &pts[i0]), &sub(&pts[i], &pts[i0])) != [0, 0, 0])?;
        let i3 = (0..pts.len()).find(|&i| orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]) != 0)?;
        let mut faces = Vec::new();
        let tet = [i0, i1, i2, i3];
        for skip in 0..4 {
            let f: Vec<usize> = tet.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
            let other = tet[skip];
            let mut f = [f[0], f[1], f[2]];
            if orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[other]) > 0 {
                f.swap(1, 2);
            }
            faces.push(f);
        }
        for p in 0..pts.len() {
            if tet.contains(&p) {
                continue;
            }
            let visible: Vec<bool> =
                faces.iter().map(|f| orient(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[p]) > 0).collect();
            if !visible.iter().any(|&v| v) {
                continue;
            }
            let mut edges = HashSet::new();
            for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
                for k in 0..3 {
                    edges.insert((f[k], f[(k + 1) % 3]));
                }
            }
            let horizon: Vec<(usize, usize)> = edges.iter().filter(|(a, b)| !edges.contains(&(*b, *a))).copied().collect();
            faces = faces.into_iter().zip(&visible).filter(|(_, v)| !**v).map(|(f, _)| f).collect();
            faces.extend(horizon.into_iter().map(|(a, b)| [a, b, p]));
        }
        Some(Hull { pts, index, faces })
    }
}

/// `Vol(K + sL)` at `s = 0, 1, 2, 3`, solved for the coefficients
/// `[Vol K, 3𝖵(K,K,L), 3𝖵(K,L,L), Vol L]`.
pub fn volume_polynomial(k: &PointSet, l: &PointSet) -> [Q; 4] {
    let vals: Vec<Q> = (0..4).map(|s| k.minkowski_sum(&l.scaled(&qi(s))).volume()).collect();
    // Newton forward differences on s = 0..3, then convert to monomials
    let d1: Vec<Q> = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d2: Vec<Q> = d1.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d3 = &d2[1] - &d2[0];
    // p(s) = v0 + d1 s + d2 s(s-1)/2 + d3 s(s-1)(s-2)/6
    let (two, six) = (qi(2), qi(6));
    let c3 = &d3 / &six;
    let c2 = &d2[0] / &two - &d3 / &two;
    let c1 = &d1[0] - &d2[0] / &two + &d3 / &qi(3);
    [vals[0].clone(), c1, c2, c3]
}

/// `(𝖵(K,K,L), 𝖵(K,L,L))` from the fitted volume polynomial.
pub fn fitted_mixed_volumes(k: &PointSet, l: &PointSet) -> (Q, Q) {
    let c = volume_polynomial(k, l);
    (&c[1] / &qi(3), &c[2] / &qi(3))
}

#[test]
fn hull_oracle_sanity() {
    let cube = PointSet::zonotope(&Zonotope::cube(3));
    assert_eq!(cube.0.len(), 8);
    assert_eq!(cube.volume(), qi(8));
    let cross = PointSet::symmetric(&[Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0]), Vector::from_ints(&[0, 0, 1])]);
    assert_eq!(cross.volume(), Q::new(BigInt::from(4), BigInt::from(3)));
    let surface = cube.integrate_area(|w| (w[0].clone() * &w[0] + &w[1] * &w[1] + &w[2] * &w[2]) / cube.support(w));
    assert_eq!(surface, qi(24));
}
