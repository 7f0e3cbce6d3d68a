use nalgebra::{Matrix2, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{Body, SmoothBody, SupportExpr};
use crate::error::{check_dim, Error, Result};
use crate::inequalities::InequalityReport;

/// Centroid rule on a subdivided icosahedron: one node per spherical
/// triangle, weighted by its exact spherical area.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub level: u32,
    pub nodes: Vec<Vector3<f64>>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn icosahedral(level: u32) -> Self {
        let mut tris = icosahedron();
        for _ in 0..level {
            tris = tris
                .into_iter()
                .flat_map(|[a, b, c]| {
                    let ab = (a + b).normalize();
                    let bc = (b + c).normalize();
                    let ca = (c + a).normalize();
                    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
                })
                .collect();
        }
        let (nodes, weights) = tris
            .iter()
            .map(|[a, b, c]| ((a + b + c).normalize(), spherical_area(a, b, c)))
            .unzip();
        SphereQuadrature { level, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ ω_j g(x_j)`, evaluated in parallel and summed in node order.
    pub fn integrate<F>(&self, g: F) -> f64
    where
        F: Fn(&Vector3<f64>) -> f64 + Sync,
    {
        let vals: Vec<f64> = self.nodes.par_iter().map(&g).collect();
        vals.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

fn icosahedron() -> Vec<[Vector3<f64>; 3]> {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let v: Vec<Vector3<f64>> = [
        [-1.0, p, 0.0],
        [1.0, p, 0.0],
        [-1.0, -p, 0.0],
        [1.0, -p, 0.0],
        [0.0, -1.0, p],
        [0.0, 1.0, p],
        [0.0, -1.0, -p],
        [0.0, 1.0, -p],
        [p, 0.0, -1.0],
        [p, 0.0, 1.0],
        [-p, 0.0, -1.0],
        [-p, 0.0, 1.0],
    ]
    .iter()
    .map(|c| Vector3::new(c[0], c[1], c[2]).normalize())
    .collect();
    const FACES: [[usize; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    FACES.iter().map(|f| [v[f[0]], v[f[1]], v[f[2]]]).collect()
}

/// `tan(E/2) = |a·(b×c)| / (1 + a·b + b·c + c·a)` for unit vectors.
fn spherical_area(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let num = a.dot(&b.cross(c)).abs();
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// Orthonormal basis of `x^⊥`.
fn tangent_frame(x: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let pick = if x.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (pick - x * x.dot(&pick)).normalize();
    let e2 = x.cross(&e1);
    (e1, e2)
}

/// Value and spherical Hessian `D²h` (restricted to `x^⊥`) of a smooth
/// support function expression at a unit vector.
#[derive(Clone, Debug)]
pub struct SmoothExpr {
    terms: Vec<(f64, SmoothBody)>,
}

impl SmoothExpr {
    pub fn new(terms: Vec<(f64, SmoothBody)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Precondition("empty smooth expression".into()));
        };
        let n = first.1.dim();
        for (_, b) in &terms {
            check_dim(n, b.dim())?;
        }
        Ok(SmoothExpr { terms })
    }

    pub fn body(k: &SmoothBody) -> Self {
        SmoothExpr { terms: vec![(1.0, k.clone())] }
    }

    pub fn from_support_expr(f: &SupportExpr) -> Result<Self> {
        let terms = f
            .terms()
            .iter()
            .map(|(a, b)| match b {
                Body::Smooth(s) => Ok((a.to_f64(), s.clone())),
                _ => Err(Error::Unsupported("quadrature needs smooth bodies only in f".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    /// `h_L - a·h_K`.
    pub fn difference(l: &SmoothBody, a: f64, k: &SmoothBody) -> Result<Self> {
        Self::new(vec![(1.0, l.clone()), (-a, k.clone())])
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }

    pub fn eval(&self, x: &Vector3<f64>) -> f64 {
        self.terms.iter().map(|(a, b)| a * b.support_f64(x.as_slice())).sum()
    }

    pub fn d2(&self, x: &Vector3<f64>, frame: &(Vector3<f64>, Vector3<f64>)) -> Matrix2<f64> {
        let mut out = Matrix2::zeros();
        for (a, b) in &self.terms {
            let h = b.hessian_f64(x.as_slice());
            let e = [frame.0, frame.1];
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = 0.0;
                    for p in 0..3 {
                        for q in 0..3 {
                            s += e[i][p] * h[(p, q)] * e[j][q];
                        }
                    }
                    out[(i, j)] += a * s;
                }
            }
        }
        (out + out.transpose()) * 0.5
    }
}

/// `𝖣(A, B) = (det(A+B) - det A - det B) / 2` for 2×2 matrices.
pub fn mixed_discriminant_2x2(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    ((a + b).determinant() - a.determinant() - b.determinant()) / 2.0
}

#[derive(Clone, Copy, Debug)]
struct NodeData {
    h: f64,
    f: f64,
    d_hh: f64,
    d_fh: f64,
    d_ff: f64,
}

fn node_data(k: &SmoothExpr, f: &SmoothExpr, x: &Vector3<f64>) -> NodeData {
    let frame = tangent_frame(x);
    let dk = k.d2(x, &frame);
    let df = f.d2(x, &frame);
    NodeData {
        h: k.eval(x),
        f: f.eval(x),
        d_hh: dk.determinant(),
        d_fh: mixed_discriminant_2x2(&df, &dk),
        d_ff: df.determinant(),
    }
}

fn gather(q: &SphereQuadrature, k: &SmoothBody, f: &SmoothExpr) -> Result<Vec<NodeData>> {
    check_dim(3, k.dim())?;
    check_dim(3, f.dim())?;
    let ke = SmoothExpr::body(k);
    let data: Vec<NodeData> = q.nodes.par_iter().map(|x| node_data(&ke, f, x)).collect();
    if let Some(j) = data.iter().position(|d| !(d.h > 0.0) || !(d.d_hh > 0.0)) {
        return Err(Error::Precondition(format!(
            "K not strictly convex at node {j}: h = {}, det D²h = {}",
            data[j].h, data[j].d_hh
        )));
    }
    Ok(data)
}

fn weighted_sum(q: &SphereQuadrature, data: &[NodeData], g: impl Fn(&NodeData) -> f64) -> f64 {
    data.iter().zip(&q.weights).map(|(d, w)| w * g(d)).sum()
}

/// The three quadratic forms on `S²` (`n = 3`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForms {
    /// `⟨Af, Af⟩ = ∫ (h/3) 𝖣(f,h)²/𝖣(h,h) dω`
    pub af_af: f64,
    /// `⟨f, Af⟩ = ∫ (f/3) 𝖣(f,h) dω`
    pub f_af: f64,
    /// `⟨f, f⟩ = ∫ f² 𝖣(h,h)/(3h) dω`
    pub f_f: f64,
    /// `(1/3) ∫ h 𝖣(f,f) dω`, equal to `⟨f, Af⟩` by symmetry of mixed volumes.
    pub h_ff: f64,
    /// Bochner right side `∫ (h/3){𝖣(f,h)²/𝖣(h,h) - 𝖣(f,f)} dω`.
    pub bochner_rhs: f64,
}

pub fn quadratic_forms(k: &SmoothBody, f: &SmoothExpr, q: &SphereQuadrature) -> Result<QuadraticForms> {
    let data = gather(q, k, f)?;
    let third = 1.0 / 3.0;
    Ok(QuadraticForms {
        af_af: weighted_sum(q, &data, |d| third * d.h * d.d_fh * d.d_fh / d.d_hh),
        f_af: weighted_sum(q, &data, |d| third * d.f * d.d_fh),
        f_f: weighted_sum(q, &data, |d| third * d.f * d.f * d.d_hh / d.h),
        h_ff: weighted_sum(q, &data, |d| third * d.h * d.d_ff),
        bochner_rhs: weighted_sum(q, &data, |d| third * d.h * (d.d_fh * d.d_fh / d.d_hh - d.d_ff)),
    })
}

/// `𝖵(f, K, K) = (1/3) ∫ f det D²h_K dω`; with `f = h_K` this is `Vol(K)`.
pub fn first_mixed_volume(k: &SmoothBody, f: &SmoothExpr, q: &SphereQuadrature) -> Result<f64> {
    let data = gather(q, k, f)?;
    Ok(weighted_sum(q, &data, |d| d.f * d.d_hh / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BochnerResidual {
    pub level: u32,
    /// `⟨Af, Af⟩ - ⟨f, Af⟩`
    pub side1: f64,
    /// integral of the mixed-discriminant deficit
    pub side2: f64,
    pub residual: f64,
    /// smallest pointwise value of the integrand of `side2`
    pub min_integrand: f64,
}

pub fn bochner_residual(k: &SmoothBody, f: &SmoothExpr, q: &SphereQuadrature) -> Result<BochnerResidual> {
    let forms = quadratic_forms(k, f, q)?;
    let data = gather(q, k, f)?;
    let min_integrand = data
        .iter()
        .map(|d| d.h * (d.d_fh * d.d_fh / d.d_hh - d.d_ff) / 3.0)
        .fold(f64::INFINITY, f64::min);
    let side1 = forms.af_af - forms.f_af;
    let side2 = forms.bochner_rhs;
    Ok(BochnerResidual { level: q.level, side1, side2, residual: (side1 - side2).abs(), min_integrand })
}

/// Residuals across subdivision levels.
pub fn bochner_convergence(k: &SmoothBody, f: &SmoothExpr, levels: &[u32]) -> Result<Vec<BochnerResidual>> {
    levels.iter().map(|&l| bochner_residual(k, f, &SphereQuadrature::icosahedral(l))).collect()
}

/// `⟨Af, Af⟩ ≥ ½⟨f, Af⟩ + ½⟨f, f⟩` on `S²`. The error bound is the change
/// in the deficit from the previous level plus a roundoff floor.
pub fn check_superlich_quadrature(k: &SmoothBody, f: &SmoothExpr, level: u32) -> Result<InequalityReport> {
    if level == 0 {
        return Err(Error::Precondition("quadrature level must be at least 1".into()));
    }
    let fine = quadratic_forms(k, f, &SphereQuadrature::icosahedral(level))?;
    let coarse = quadratic_forms(k, f, &SphereQuadrature::icosahedral(level - 1))?;
    let sides = |q: &QuadraticForms| (q.af_af, 0.5 * q.f_af + 0.5 * q.f_f);
    let (lhs, rhs) = sides(&fine);
    let (cl, cr) = sides(&coarse);
    let scale = lhs.abs().max(rhs.abs()).max(1e-300);
    let bound = ((lhs - rhs) - (cl - cr)).abs() + 1e-10 * scale;
    Ok(InequalityReport::with_error_bound("superlich", 3, "quadrature", lhs, rhs, bound)
        .term("f_af", crate::arith::Scalar::float(fine.f_af))
        .term("f_f", crate::arith::Scalar::float(fine.f_f))
        .term("level", crate::arith::Scalar::int(level as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_sphere_area() {
        for level in 0..4 {
            let q = SphereQuadrature::icosahedral(level);
            assert_eq!(q.len(), 20 * 4usize.pow(level));
            let total: f64 = q.weights.iter().sum();
            assert!((total - 4.0 * PI).abs() < 1e-10);
            assert!(q.nodes.iter().all(|x| (x.norm() - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn integrates_quadratics() {
        let q = SphereQuadrature::icosahedral(5);
        let v = q.integrate(|x| x.z * x.z);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-3);
    }

    #[test]
    fn ball_volume_form() {
        // f = h_K on the unit ball: every form is Vol(B) = 4π/3
        let k = SmoothBody::ball(3);
        let q = SphereQuadrature::icosahedral(3);
        let forms = quadratic_forms(&k, &SmoothExpr::body(&k), &q).unwrap();
        for v in [forms.af_af, forms.f_af, forms.f_f, forms.h_ff] {
            assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
        }
        let b = bochner_residual(&k, &SmoothExpr::body(&k), &q).unwrap();
        assert!(b.side1.abs() < 1e-12 && b.side2.abs() < 1e-12);
    }

    #[test]
    fn superlich_equality_for_hk_and_margin_for_ellipsoid() {
        let k = SmoothBody::ball(3);
        let r = check_superlich_quadrature(&k, &SmoothExpr::body(&k), 3).unwrap();
        assert_eq!(r.verdict, crate::inequalities::Verdict::Equality);
        let e = SmoothBody::axis_ellipsoid(&[1.0, 1.5, 0.7]).unwrap();
        let f = SmoothExpr::difference(&e, 1.0, &k).unwrap();
        let s = check_superlich_quadrature(&k, &f, 4).unwrap();
        assert_eq!(s.verdict, crate::inequalities::Verdict::Holds);
    }
}
