//! Equality cases: the measure condition, the generator graph, direct-sum
//! certificates and the cone-volume probe.

mod certificate;
mod graph;

pub use certificate::{certify_equality, DecompositionCertificate, EqualityOutcome, Refutation, Residual};
pub use graph::{generator_graph, GeneratorGraph};

use serde::{Deserialize, Serialize};

use crate::arith::{Backend, Scalar};
use crate::bodies::{Body, Zonotope};
use crate::error::{check_dim, Error, Result};
use crate::mixedvol::{cone_volume_measure, mixed_area_measure, surface_area_measure, AtomicSphericalMeasure, Slot};

/// Both sides of `h_K dS_{f,K,…,K} = -(1/(n-1)) f dS_{K,…,K}` with
/// `f = h_L - a h_K`, `a = 𝖵(L,K,…,K)/Vol(K)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEqualityReport {
    pub a: Scalar,
    pub lhs: AtomicSphericalMeasure,
    pub rhs: AtomicSphericalMeasure,
    pub matched: bool,
    pub max_discrepancy: Scalar,
}

pub fn check_alexandrov_condition(k: &Zonotope, l: &Body) -> Result<MeasureEqualityReport> {
    let n = k.dim();
    check_dim(n, l.dim())?;
    if n < 2 {
        return Err(Error::Precondition("needs n >= 2".into()));
    }
    let k = k.to_backend(Backend::Exact)?;
    let l = l.to_backend(Backend::Exact)?;
    let vol = k.volume();
    if vol.is_zero() {
        return Err(Error::Precondition("K must be full-dimensional".into()));
    }
    let s_k = surface_area_measure(&k)?;
    let mut slots = vec![Slot::try_from(&l)?];
    slots.extend(std::iter::repeat_n(Slot::Zonotope(k.clone()), n - 2));
    let s_lk = mixed_area_measure(&slots)?;

    let nn = Scalar::int(n as i64);
    let v_lk = s_k.integrate_homogeneous(|w| l.support(w))? / nn;
    let a = v_lk / vol;
    let s_f = s_lk.add_scaled(&s_k, &-&a)?;
    let lhs = s_f.times_homogeneous(|w| k.support(w))?;
    let factor = Scalar::int(-1) / Scalar::int(n as i64 - 1);
    let rhs = s_k.times_homogeneous(|w| Ok(&factor * &(&l.support(w)? - &(&a * &k.support(w)?))))?;
    let max_discrepancy = lhs.max_discrepancy(&rhs);
    Ok(MeasureEqualityReport { a, matched: lhs == rhs, lhs, rhs, max_discrepancy })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeVolumeProbe {
    pub equal_measures: bool,
    pub same_body: bool,
    pub max_discrepancy: Scalar,
}

impl ConeVolumeProbe {
    /// Equal cone-volume measures for different bodies.
    pub fn is_collision(&self) -> bool {
        self.equal_measures && !self.same_body
    }
}

/// Compares `V_K` and `V_L` exactly.
pub fn cone_volume_uniqueness_probe(k: &Zonotope, l: &Zonotope) -> Result<ConeVolumeProbe> {
    check_dim(k.dim(), l.dim())?;
    if !k.is_full_dimensional() || !l.is_full_dimensional() {
        return Err(Error::Precondition("both bodies must be full-dimensional".into()));
    }
    let k = k.to_backend(Backend::Exact)?;
    let l = l.to_backend(Backend::Exact)?;
    let vk = cone_volume_measure(&k)?;
    let vl = cone_volume_measure(&l)?;
    Ok(ConeVolumeProbe { equal_measures: vk == vl, same_body: k == l, max_discrepancy: vk.max_discrepancy(&vl) })
}
