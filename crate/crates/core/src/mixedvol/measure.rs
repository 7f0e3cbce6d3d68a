use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{primitive_direction, Backend, Direction, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

/// How an atom's coefficient turns into mass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// mass `c·|w|` at `w/|w|`: keeps area measures rational.
    #[default]
    Length,
    /// mass `c` at `w/|w|`: used once a measure has been multiplied by a
    /// 1-homogeneous density such as `h_K/n`.
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub w: Vector,
    pub c: Scalar,
}

/// A finite signed measure on the sphere, stored as atoms `(w, c)`.
///
/// Exact measures are canonical: one atom per primitive direction, sorted,
/// with zero atoms dropped. Two exact measures are equal iff their atom
/// lists are equal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "MeasureJson", try_from = "MeasureJson")]
pub struct AtomicSphericalMeasure {
    dim: usize,
    weighting: Weighting,
    atoms: Vec<Atom>,
}

impl AtomicSphericalMeasure {
    pub fn new(dim: usize, weighting: Weighting, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            check_dim(dim, a.w.dim())?;
            if a.w.is_zero() {
                return Err(Error::Precondition("measure atom with zero direction".into()));
            }
        }
        Ok(Self::canonical(dim, weighting, atoms))
    }

    pub fn zero(dim: usize, weighting: Weighting) -> Self {
        AtomicSphericalMeasure { dim, weighting, atoms: Vec::new() }
    }

    pub(crate) fn canonical(dim: usize, weighting: Weighting, atoms: Vec<Atom>) -> Self {
        let exact = atoms.iter().all(|a| a.w.is_exact() && a.c.is_exact());
        if !exact {
            let atoms = atoms.into_iter().filter(|a| !a.c.is_zero()).collect();
            return AtomicSphericalMeasure { dim, weighting, atoms };
        }
        let mut merged: BTreeMap<Direction, Scalar> = BTreeMap::new();
        for a in atoms {
            let (dir, s) = primitive_direction(&a.w).expect("nonzero exact atom");
            let c = match weighting {
                Weighting::Length => &a.c * &Scalar::Exact(s),
                Weighting::Absolute => a.c,
            };
            *merged.entry(dir).or_insert_with(Scalar::zero) += c;
        }
        let atoms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| Atom { w: d.to_vector(), c })
            .collect();
        AtomicSphericalMeasure { dim, weighting, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn backend(&self) -> Backend {
        if self.atoms.iter().all(|a| a.w.is_exact() && a.c.is_exact()) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    /// Whether the atoms are closed under `w ↦ -w` with equal mass.
    pub fn is_even(&self) -> bool {
        let neg = AtomicSphericalMeasure::canonical(
            self.dim,
            self.weighting,
            self.atoms.iter().map(|a| Atom { w: -&a.w, c: a.c.clone() }).collect(),
        );
        if self.backend() == Backend::Exact {
            return neg == *self;
        }
        let key = |m: &AtomicSphericalMeasure| {
            let mut v: Vec<(Vec<f64>, f64)> = m
                .atoms
                .iter()
                .map(|a| {
                    let n = a.w.norm_f64();
                    let mass = match m.weighting {
                        Weighting::Length => a.c.to_f64() * n,
                        Weighting::Absolute => a.c.to_f64(),
                    };
                    (a.w.to_f64s().iter().map(|x| x / n).collect(), mass)
                })
                .collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            v
        };
        let (a, b) = (key(self), key(&neg));
        a.len() == b.len()
            && a.iter().zip(&b).all(|(x, y)| {
                x.0.iter().zip(&y.0).all(|(p, q)| (p - q).abs() < 1e-9) && (x.1 - y.1).abs() < 1e-9 * x.1.abs().max(1.0)
            })
    }

    /// `∫ f dμ` for a 1-homogeneous `f` on a length-weighted measure:
    /// `Σ c·f(w)`, exact when `f` is.
    pub fn integrate_homogeneous<F>(&self, mut f: F) -> Result<Scalar>
    where
        F: FnMut(&Vector) -> Result<Scalar>,
    {
        if self.weighting != Weighting::Length {
            return Err(Error::Precondition(
                "homogeneous integration needs a length-weighted measure".into(),
            ));
        }
        let mut acc = Scalar::zero();
        for a in &self.atoms {
            acc += &a.c * &f(&a.w)?;
        }
        Ok(acc)
    }

    /// `∫ g dμ` for a 0-homogeneous `g` (any weighting): `Σ mass·g(w)`.
    /// Length-weighted masses involve `|w|`, so this is float-valued.
    pub fn integrate_f64<F>(&self, mut g: F) -> f64
    where
        F: FnMut(&Vector) -> f64,
    {
        self.atoms.iter().map(|a| self.mass_f64(a) * g(&a.w)).sum()
    }

    pub fn mass_f64(&self, a: &Atom) -> f64 {
        match self.weighting {
            Weighting::Length => a.c.to_f64() * a.w.norm_f64(),
            Weighting::Absolute => a.c.to_f64(),
        }
    }

    /// Total mass: exact for absolute weighting, float otherwise.
    pub fn total_mass(&self) -> Scalar {
        match self.weighting {
            Weighting::Absolute => self.atoms.iter().map(|a| a.c.clone()).sum(),
            Weighting::Length => Scalar::float(self.integrate_f64(|_| 1.0)),
        }
    }

    /// `φ·μ` as an absolute measure for a 1-homogeneous density `φ`
    /// (mass `c·φ(w)` at `w/|w|`). Requires a length-weighted input.
    pub fn times_homogeneous<F>(&self, mut phi: F) -> Result<AtomicSphericalMeasure>
    where
        F: FnMut(&Vector) -> Result<Scalar>,
    {
        if self.weighting != Weighting::Length {
            return Err(Error::Precondition("density multiplication needs a length-weighted measure".into()));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom { w: a.w.clone(), c: &a.c * &phi(&a.w)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(self.dim, Weighting::Absolute, atoms))
    }

    /// `self + s·other` (same dimension and weighting).
    pub fn add_scaled(&self, other: &AtomicSphericalMeasure, s: &Scalar) -> Result<AtomicSphericalMeasure> {
        check_dim(self.dim, other.dim)?;
        if self.weighting != other.weighting {
            return Err(Error::Precondition("cannot add measures with different weightings".into()));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().map(|a| Atom { w: a.w.clone(), c: &a.c * s }));
        Ok(Self::canonical(self.dim, self.weighting, atoms))
    }

    pub fn scaled(&self, s: &Scalar) -> AtomicSphericalMeasure {
        let atoms = self.atoms.iter().map(|a| Atom { w: a.w.clone(), c: &a.c * s }).collect();
        Self::canonical(self.dim, self.weighting, atoms)
    }

    /// Directions of the support, one per atom.
    pub fn support_directions(&self) -> Vec<Vector> {
        self.atoms.iter().map(|a| a.w.clone()).collect()
    }

    /// Largest `|c_μ - c_ν|` over the union of directions (exact measures).
    pub fn max_discrepancy(&self, other: &AtomicSphericalMeasure) -> Scalar {
        let diff = match self.add_scaled(other, &Scalar::int(-1)) {
            Ok(d) => d,
            Err(_) => return Scalar::float(f64::INFINITY),
        };
        diff.atoms.iter().map(|a| a.c.abs()).fold(Scalar::zero(), Scalar::max)
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.atoms.iter().all(|a| !a.c.is_negative())
    }

    pub fn to_serde(&self) -> MeasureJson {
        MeasureJson { dim: self.dim, weighting: self.weighting, atoms: self.atoms.clone() }
    }

    pub fn from_serde(m: MeasureJson) -> Result<Self> {
        Self::new(m.dim, m.weighting, m.atoms)
    }
}

/// The JSON shape `{"dim": n, "atoms": [{"w": [...], "c": "p/q"}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "is_length")]
    pub weighting: Weighting,
    pub atoms: Vec<Atom>,
}

fn is_length(w: &Weighting) -> bool {
    *w == Weighting::Length
}

impl From<AtomicSphericalMeasure> for MeasureJson {
    fn from(m: AtomicSphericalMeasure) -> Self {
        MeasureJson { dim: m.dim, weighting: m.weighting, atoms: m.atoms }
    }
}

impl TryFrom<MeasureJson> for AtomicSphericalMeasure {
    type Error = Error;

    fn try_from(m: MeasureJson) -> Result<Self> {
        AtomicSphericalMeasure::from_serde(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_atoms_merge_with_length_rescaling() {
        let m = AtomicSphericalMeasure::new(
            2,
            Weighting::Length,
            vec![
                Atom { w: Vector::from_ints(&[2, 0]), c: Scalar::one() },
                Atom { w: Vector::from_ints(&[1, 0]), c: Scalar::one() },
                Atom { w: Vector::from_ints(&[-1, 0]), c: Scalar::int(3) },
            ],
        )
        .unwrap();
        assert_eq!(m.len(), 2);
        // (2,0) with c = 1 is (1,0) with c = 2
        let plus = m.atoms().iter().find(|a| a.w == Vector::from_ints(&[1, 0])).unwrap();
        assert_eq!(plus.c, Scalar::int(3));
        assert!(m.is_even());
    }

    #[test]
    fn absolute_atoms_keep_their_mass() {
        let m = AtomicSphericalMeasure::new(
            2,
            Weighting::Absolute,
            vec![
                Atom { w: Vector::from_ints(&[0, 4]), c: Scalar::ratio(1, 2) },
                Atom { w: Vector::from_ints(&[0, 1]), c: Scalar::ratio(-1, 2) },
            ],
        )
        .unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let m = AtomicSphericalMeasure::new(
            2,
            Weighting::Length,
            vec![Atom { w: Vector::from_ints(&[0, 1]), c: Scalar::ratio(2, 3) }],
        )
        .unwrap();
        let s = serde_json::to_string(&m.to_serde()).unwrap();
        assert_eq!(s, r#"{"dim":2,"atoms":[{"w":["0","1"],"c":"2/3"}]}"#);
        let back: MeasureJson = serde_json::from_str(&s).unwrap();
        assert_eq!(AtomicSphericalMeasure::from_serde(back).unwrap(), m);
    }
}
