use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{Backend, Scalar};
use crate::error::Result;

/// A coordinate vector. Directions on the sphere are stored unnormalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| Scalar::int(c)).collect())
    }

    pub fn from_f64s(coords: &[f64]) -> Self {
        Vector(coords.iter().map(|&c| Scalar::float(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    /// The `i`-th coordinate vector of `R^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.0.iter()
    }

    pub fn backend(&self) -> Backend {
        if self.0.iter().all(Scalar::is_exact) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn is_exact(&self) -> bool {
        self.backend() == Backend::Exact
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Vector> {
        self.0
            .iter()
            .map(|c| c.to_backend(backend))
            .collect::<Result<Vec<_>>>()
            .map(Vector)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Scalar::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc += a * b;
        }
        acc
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn norm_f64(&self) -> f64 {
        self.to_f64s().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

/// A primitive integer vector: nonzero, coprime coordinates.
///
/// Two exact vectors are positively parallel iff they share a `Direction`;
/// the derived `Ord` gives a total order used to merge and compare atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(Vec<BigInt>);

impl Direction {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_vector(&self) -> Vector {
        Vector(self.0.iter().cloned().map(Scalar::from_bigint).collect())
    }

    pub fn negate(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }

    /// Whether the first nonzero coordinate is positive.
    pub fn is_sign_normalized(&self) -> bool {
        self.0.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }
}

/// Splits an exact nonzero vector as `v = scale · dir` with `dir` primitive
/// and `scale > 0`. Returns `None` for zero or float vectors.
pub fn primitive_direction(v: &Vector) -> Option<(Direction, BigRational)> {
    let rats: Vec<&BigRational> = v.0.iter().map(Scalar::as_rational).collect::<Option<_>>()?;
    if rats.iter().all(|r| r.is_zero()) {
        return None;
    }
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let dir = Direction(ints.iter().map(|x| x / &content).collect());
    Some((dir, BigRational::new(content, lcm)))
}

/// Like [`primitive_direction`] but identifies `v` with `-v`: the direction
/// is sign-normalized and the returned scale carries the sign.
pub fn line_direction(v: &Vector) -> Option<(Direction, BigRational)> {
    let (dir, scale) = primitive_direction(v)?;
    if dir.is_sign_normalized() {
        Some((dir, scale))
    } else {
        Some((dir.negate(), -scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = Vector::new(vec![Scalar::ratio(1, 2), Scalar::ratio(-3, 4), Scalar::zero()]);
        let (dir, scale) = primitive_direction(&v).unwrap();
        assert_eq!(dir.coords(), &[BigInt::from(2), BigInt::from(-3), BigInt::zero()]);
        assert_eq!(scale, BigRational::new(1.into(), 4.into()));
        assert!(primitive_direction(&Vector::zeros(3)).is_none());
    }

    #[test]
    fn line_direction_fixes_sign() {
        let v = Vector::from_ints(&[0, -4, 6]);
        let (dir, scale) = line_direction(&v).unwrap();
        assert_eq!(dir.coords(), &[BigInt::zero(), BigInt::from(2), BigInt::from(-3)]);
        assert_eq!(scale, BigRational::from_integer((-2).into()));
    }
}
