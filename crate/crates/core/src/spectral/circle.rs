use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bodies::SmoothBody;
use crate::error::{check_dim, Error, Result};

/// Ritz modes are capped at this frequency regardless of the grid size.
pub const MAX_RITZ_MODES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleSpectrum {
    /// Sorted in decreasing order.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Frobenius norm of the mass-matrix coupling between even and odd modes.
    pub off_block_norm: f64,
    pub modes: usize,
}

impl CircleSpectrum {
    pub fn of_parity(&self, p: Parity) -> Vec<f64> {
        self.eigenvalues.iter().filter(|e| e.parity == p).map(|e| e.value).collect()
    }

    /// Largest even eigenvalue after the top one (whose eigenvector is `h_K`).
    pub fn second_even(&self) -> Option<f64> {
        self.of_parity(Parity::Even).get(1).copied()
    }
}

/// The planar operator `A f = h (f'' + f) / (h'' + h)` on a uniform grid of
/// `N` angles, with `μ = (h'' + h) / (2h) dθ`.
#[derive(Clone, Debug)]
pub struct CircleOperator {
    theta: Vec<f64>,
    h: Vec<f64>,
    rho: Vec<f64>,
}

impl CircleOperator {
    pub fn from_smooth(k: &SmoothBody, n: usize) -> Result<Self> {
        check_dim(2, k.dim())?;
        let theta = grid(n)?;
        let mut h = Vec::with_capacity(n);
        let mut rho = Vec::with_capacity(n);
        for &t in &theta {
            let x = [t.cos(), t.sin()];
            let tan = [-t.sin(), t.cos()];
            let hess = k.hessian_f64(&x);
            h.push(k.support_f64(&x));
            rho.push(
                tan[0] * (hess[(0, 0)] * tan[0] + hess[(0, 1)] * tan[1])
                    + tan[1] * (hess[(1, 0)] * tan[0] + hess[(1, 1)] * tan[1]),
            );
        }
        Self::build(theta, h, rho)
    }

    /// From samples `h(θ_j)`, with `h''` by spectral differentiation.
    pub fn from_samples(h: Vec<f64>) -> Result<Self> {
        let theta = grid(h.len())?;
        let d2 = spectral_second_derivative(&h);
        let rho = h.iter().zip(&d2).map(|(a, b)| a + b).collect();
        Self::build(theta, h, rho)
    }

    fn build(theta: Vec<f64>, h: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if let Some(j) = (0..h.len()).find(|&j| !(h[j] > 0.0) || !(rho[j] > 0.0)) {
            return Err(Error::Precondition(format!(
                "convexity violated at node {j}: h = {}, h'' + h = {}",
                h[j], rho[j]
            )));
        }
        Ok(CircleOperator { theta, h, rho })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Quadrature weights of `μ_K` at the nodes.
    pub fn weights(&self) -> Vec<f64> {
        let dt = 2.0 * PI / self.len() as f64;
        self.h.iter().zip(&self.rho).map(|(h, r)| r / (2.0 * h) * dt).collect()
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let d2 = spectral_second_derivative(f);
        (0..f.len()).map(|j| self.h[j] * (d2[j] + f[j]) / self.rho[j]).collect()
    }

    /// `∫ f g dμ_K`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights().iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
    }

    /// `(⟨Af, Af⟩, ⟨f, Af⟩, ⟨f, f⟩)`.
    pub fn quadratic_forms(&self, f: &[f64]) -> (f64, f64, f64) {
        let af = self.apply(f);
        (self.inner(&af, &af), self.inner(f, &af), self.inner(f, f))
    }

    pub fn spectrum(&self) -> Result<CircleSpectrum> {
        self.spectrum_with_modes((self.len() / 4).min(MAX_RITZ_MODES))
    }

    /// Rayleigh-Ritz on `1, cos kθ, sin kθ` for `k ≤ modes`: the stiffness
    /// form `⟨φ, Aψ⟩ = ½∫ φ(ψ'' + ψ) dθ` is diagonal and the mass matrix comes
    /// from the Fourier coefficients of the density of `μ_K`.
    pub fn spectrum_with_modes(&self, modes: usize) -> Result<CircleSpectrum> {
        if modes == 0 || 4 * modes > self.len() {
            return Err(Error::Precondition(format!(
                "need 1 <= modes <= N/4, got {modes} for N = {}",
                self.len()
            )));
        }
        let w: Vec<f64> = self.h.iter().zip(&self.rho).map(|(h, r)| r / (2.0 * h)).collect();
        let (cos_int, sin_int) = trig_moments(&w, 2 * modes);
        let basis: Vec<(usize, bool)> = std::iter::once((0, true))
            .chain((1..=modes).flat_map(|k| [(k, true), (k, false)]))
            .collect();
        let mass = |a: (usize, bool), b: (usize, bool)| -> f64 {
            let c = |p: i64| cos_int[p.unsigned_abs() as usize];
            let s = |p: i64| p.signum() as f64 * sin_int[p.unsigned_abs() as usize];
            let (ka, kb) = (a.0 as i64, b.0 as i64);
            match (a.1, b.1) {
                (true, true) => 0.5 * (c(ka - kb) + c(ka + kb)),
                (false, false) => 0.5 * (c(ka - kb) - c(ka + kb)),
                (true, false) => 0.5 * (s(ka + kb) + s(kb - ka)),
                (false, true) => 0.5 * (s(ka + kb) + s(ka - kb)),
            }
        };
        let stiff = |a: (usize, bool)| -> f64 {
            let k = a.0 as f64;
            if a.0 == 0 {
                PI
            } else {
                0.5 * (1.0 - k * k) * PI
            }
        };

        let mut off = 0.0;
        for &a in &basis {
            for &b in &basis {
                if (a.0 + b.0) % 2 == 1 {
                    off += mass(a, b).powi(2);
                }
            }
        }

        let mut eigenvalues = Vec::new();
        for parity in [Parity::Even, Parity::Odd] {
            let block: Vec<(usize, bool)> = basis
                .iter()
                .copied()
                .filter(|b| (b.0 % 2 == 0) == (parity == Parity::Even))
                .collect();
            let m = DMatrix::from_fn(block.len(), block.len(), |i, j| mass(block[i], block[j]));
            let q = DVector::from_iterator(block.len(), block.iter().map(|&b| stiff(b)));
            for value in generalized_eigenvalues(m, q)? {
                eigenvalues.push(Eigenvalue { value, parity });
            }
        }
        eigenvalues.sort_by(|a, b| b.value.total_cmp(&a.value));
        Ok(CircleSpectrum { eigenvalues, off_block_norm: off.sqrt(), modes })
    }
}

/// Eigenvalues of `diag(q) v = λ M v` with `M` symmetric positive definite.
fn generalized_eigenvalues(m: DMatrix<f64>, q: DVector<f64>) -> Result<Vec<f64>> {
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let c = &l_inv * DMatrix::from_diagonal(&q) * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    Ok(SymmetricEigen::new(c).eigenvalues.iter().copied().collect())
}

fn grid(n: usize) -> Result<Vec<f64>> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::Precondition(format!("grid size must be even and at least 8, got {n}")));
    }
    Ok((0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect())
}

fn fft(x: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// `(∫ cos(pθ) w dθ, ∫ sin(pθ) w dθ)` for `p = 0..=pmax`, by the trapezoid rule.
fn trig_moments(w: &[f64], pmax: usize) -> (Vec<f64>, Vec<f64>) {
    let n = w.len() as f64;
    let hat = fft(w);
    let scale = 2.0 * PI / n;
    let cos_int = (0..=pmax).map(|p| scale * hat[p].re).collect();
    let sin_int = (0..=pmax).map(|p| -scale * hat[p].im).collect();
    (cos_int, sin_int)
}

pub(crate) fn spectral_second_derivative(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut hat = fft(f);
    for (j, c) in hat.iter_mut().enumerate() {
        let k = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        // the Nyquist mode has no well-defined second derivative sign; drop it
        *c = if 2 * j == n { Complex::new(0.0, 0.0) } else { *c * (-k * k) };
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut hat);
    hat.iter().map(|c| c.re / n as f64).collect()
}

pub fn circle_spectrum(k: &SmoothBody, n: usize) -> Result<CircleSpectrum> {
    CircleOperator::from_smooth(k, n)?.spectrum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_spectrum_is_one_minus_k_squared() {
        let s = circle_spectrum(&SmoothBody::ball(2), 256).unwrap();
        let vals: Vec<f64> = s.eigenvalues.iter().take(7).map(|e| e.value).collect();
        let expect = [1.0, 0.0, 0.0, -3.0, -3.0, -8.0, -8.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-9, "{vals:?}");
        }
        assert_eq!(s.eigenvalues[0].parity, Parity::Even);
        assert_eq!(s.eigenvalues[1].parity, Parity::Odd);
        let even = s.of_parity(Parity::Even);
        assert!((even[1] + 3.0).abs() < 1e-9 && (even[3] + 15.0).abs() < 1e-9);
        assert!(s.off_block_norm < 1e-10);
    }

    #[test]
    fn ellipse_threshold() {
        let k = SmoothBody::axis_ellipsoid(&[1.0, 2.0]).unwrap();
        let s = circle_spectrum(&k, 1024).unwrap();
        assert!((s.eigenvalues[0].value - 1.0).abs() < 1e-6);
        assert!(s.second_even().unwrap() <= -1.0 - 1e-3);
        let odd = s.of_parity(Parity::Odd);
        assert!(odd[0].abs() < 1e-8 && odd[1].abs() < 1e-8);
    }

    #[test]
    fn operator_fixes_h_and_is_symmetric() {
        let k = SmoothBody::axis_ellipsoid(&[1.0, 3.0]).unwrap();
        let op = CircleOperator::from_smooth(&k, 256).unwrap();
        let ah = op.apply(op.h());
        let err = ah.iter().zip(op.h()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        let f: Vec<f64> = op.theta().iter().map(|t| (2.0 * t).cos() + 0.3 * (4.0 * t).sin()).collect();
        let g: Vec<f64> = op.theta().iter().map(|t| 1.0 + (2.0 * t).sin()).collect();
        let (fag, afg) = (op.inner(&f, &op.apply(&g)), op.inner(&op.apply(&f), &g));
        assert!((fag - afg).abs() < 1e-10);
    }

    #[test]
    fn samples_match_analytic_curvature() {
        let k = SmoothBody::axis_ellipsoid(&[1.0, 2.0]).unwrap();
        let a = CircleOperator::from_smooth(&k, 512).unwrap();
        let b = CircleOperator::from_samples(a.h().to_vec()).unwrap();
        for (x, y) in a.rho.iter().zip(&b.rho) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_nonconvex_samples() {
        let h: Vec<f64> = grid(64).unwrap().iter().map(|t| 1.0 + 0.5 * (4.0 * t).cos()).collect();
        assert!(matches!(CircleOperator::from_samples(h), Err(Error::Precondition(_))));
    }
}
