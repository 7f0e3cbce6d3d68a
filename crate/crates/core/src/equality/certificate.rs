use serde::{Deserialize, Serialize};

use crate::arith::{rank, Backend, Scalar, Vector};
use crate::bodies::{Body, SupportExpr, Zonotope};
use crate::error::{Error, Result};
use crate::inequalities::{check_local_logbm, Verdict};
use crate::mixedvol::{mixed_area_measure, surface_area_measure, Slot};

use super::graph::generator_graph;

/// `K = C_1 + … + C_m` with `L` matching `a_1 C_1 + … + a_m C_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionCertificate {
    /// Generator indices of `K` (canonical order) per summand.
    pub components: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub scales: Vec<Scalar>,
    #[serde(skip)]
    pub residual: Residual,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Residual {
    pub atoms_checked: usize,
    pub max_support_gap: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub refutation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness_atoms: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EqualityOutcome {
    Certified(DecompositionCertificate),
    Refuted(Refutation),
}

impl EqualityOutcome {
    pub fn certificate(&self) -> Option<&DecompositionCertificate> {
        match self {
            EqualityOutcome::Certified(c) => Some(c),
            EqualityOutcome::Refuted(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }
}

impl DecompositionCertificate {
    /// Structural checks against `K`: the components partition the
    /// generators, `dims` are their spans, the spans form a direct sum of
    /// `R^n`, and the scales are nonnegative.
    pub fn validate(&self, k: &Zonotope) -> Result<()> {
        let m = self.components.len();
        if self.dims.len() != m || self.scales.len() != m {
            return Err(Error::Precondition("components, dims and scales differ in length".into()));
        }
        let mut seen = vec![false; k.len()];
        for c in &self.components {
            for &i in c {
                match seen.get_mut(i) {
                    Some(s) if !*s => *s = true,
                    Some(_) => return Err(Error::Precondition(format!("generator {i} listed twice"))),
                    None => return Err(Error::Precondition(format!("generator index {i} out of range"))),
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Precondition("components do not cover every generator".into()));
        }
        for (c, &d) in self.components.iter().zip(&self.dims) {
            if span_dim(k, c) != d {
                return Err(Error::Precondition("dims disagree with component spans".into()));
            }
        }
        if self.dims.iter().sum::<usize>() != k.dim() || k.rank() != k.dim() {
            return Err(Error::Precondition("spans do not form a direct sum of R^n".into()));
        }
        if self.scales.iter().any(Scalar::is_negative) {
            return Err(Error::Precondition("negative scale".into()));
        }
        Ok(())
    }

    pub fn summands(&self, k: &Zonotope) -> Result<Vec<Zonotope>> {
        self.components.iter().map(|c| k.restrict(c)).collect()
    }

    /// `Σ a_i C_i`.
    pub fn reconstruct(&self, k: &Zonotope) -> Result<Zonotope> {
        let mut acc = Zonotope::new(k.dim(), Vec::new())?;
        for (c, a) in self.summands(k)?.iter().zip(&self.scales) {
            acc = acc.minkowski_sum(&c.scaled(a)?)?;
        }
        Ok(acc)
    }
}

fn span_dim(k: &Zonotope, idx: &[usize]) -> usize {
    let rows: Vec<Vector> = idx.iter().map(|&i| k.generators()[i].u.clone()).collect();
    rank(&rows)
}

fn refute(reason: impl Into<String>, witness: Vec<Vector>) -> EqualityOutcome {
    EqualityOutcome::Refuted(Refutation { refutation: reason.into(), witness_atoms: witness, deficit: None })
}

/// Decides whether `(K, L)` is an equality case of the local log-BM
/// inequality and, if so, produces the direct-sum decomposition.
pub fn certify_equality(k: &Zonotope, l: &Body) -> Result<EqualityOutcome> {
    let k = k.to_backend(Backend::Exact)?;
    let l = l.to_backend(Backend::Exact)?;
    let report = check_local_logbm(&k, &SupportExpr::body(l.clone()))?;
    if report.verdict != Verdict::Equality {
        return Ok(EqualityOutcome::Refuted(Refutation {
            refutation: "inequality strict".into(),
            witness_atoms: Vec::new(),
            deficit: Some(report.deficit),
        }));
    }

    let graph = generator_graph(&k)?;
    let components = graph.components.clone();
    let dims: Vec<usize> = components.iter().map(|c| span_dim(&k, c)).collect();
    if dims.iter().sum::<usize>() != k.dim() {
        return Ok(refute("generator components do not span a direct sum", Vec::new()));
    }

    let s_k = surface_area_measure(&k)?;
    let mut scales: Vec<Option<(Scalar, Vector)>> = vec![None; components.len()];
    for a in s_k.atoms() {
        let touched: Vec<usize> = (0..components.len())
            .filter(|&i| components[i].iter().any(|&g| !k.generators()[g].u.dot(&a.w).is_zero()))
            .collect();
        let [ci] = touched[..] else {
            return Ok(refute("atom touches more than one component", vec![a.w.clone()]));
        };
        let ratio = &l.support(&a.w)? / &k.support(&a.w)?;
        match &scales[ci] {
            None => scales[ci] = Some((ratio, a.w.clone())),
            Some((first, w0)) if *first != ratio => {
                return Ok(refute(
                    format!("scale not constant on component {ci}: {first} vs {ratio}"),
                    vec![w0.clone(), a.w.clone()],
                ));
            }
            Some(_) => {}
        }
    }
    let Some(scales) = scales.into_iter().map(|s| s.map(|(a, _)| a)).collect::<Option<Vec<_>>>() else {
        return Ok(refute("a component meets no atom", Vec::new()));
    };

    let mut cert = DecompositionCertificate { components, dims, scales, residual: Residual::default() };
    cert.validate(&k)?;
    let l_prime = cert.reconstruct(&k)?;
    let mut slots = vec![Slot::Zonotope(l_prime.clone())];
    slots.extend(std::iter::repeat_n(Slot::Zonotope(k.clone()), k.dim() - 2));
    let s_lk = mixed_area_measure(&slots)?;
    let mut gap = Scalar::zero();
    let mut checked = 0;
    for w in s_k.support_directions().iter().chain(s_lk.support_directions().iter()) {
        let d = (&l.support(w)? - &l_prime.support(w)?).abs();
        if !d.is_zero() {
            return Ok(refute("h_L and the reconstruction disagree on an atom", vec![w.clone()]));
        }
        gap = gap.max(d);
        checked += 1;
    }
    cert.residual = Residual { atoms_checked: checked, max_support_gap: gap };
    Ok(EqualityOutcome::Certified(cert))
}
