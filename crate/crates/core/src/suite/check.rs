use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{Backend, Scalar, Vector};
use crate::bodies::{geomean_volume_bounds, Body, SmoothBody};
use crate::equality::check_alexandrov_condition;
use crate::error::{Error, Result};
use crate::inequalities::{
    check_bm, check_induction_step, check_local_logbm, check_log_minkowski, check_minkowski_first,
    check_minkowski_second, InequalityReport,
};
use crate::io::BodiesFile;
use crate::spectral::{
    bochner_residual, check_superlich_circle, check_superlich_quadrature, first_mixed_volume, CircleOperator,
    SmoothExpr, SphereQuadrature,
};

use super::random::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Bm,
    Mink1,
    Mink2,
    LocalLogbm,
    Logmink,
    Indstep,
    AlexandrovEq,
    Superlich,
    Bochner,
    Geomean,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::Bm,
        CheckName::Mink1,
        CheckName::Mink2,
        CheckName::LocalLogbm,
        CheckName::Logmink,
        CheckName::Indstep,
        CheckName::AlexandrovEq,
        CheckName::Superlich,
        CheckName::Bochner,
        CheckName::Geomean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Bm => "bm",
            CheckName::Mink1 => "mink1",
            CheckName::Mink2 => "mink2",
            CheckName::LocalLogbm => "local-logbm",
            CheckName::Logmink => "logmink",
            CheckName::Indstep => "indstep",
            CheckName::AlexandrovEq => "alexandrov-eq",
            CheckName::Superlich => "superlich",
            CheckName::Bochner => "bochner",
            CheckName::Geomean => "geomean",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

/// Knobs shared by every check. Task fields in the bodies file take
/// precedence over `level`, `grid` and `budget`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Convert polytopal bodies to this backend first; `None` keeps the file's.
    pub backend: Option<Backend>,
    /// Relative band for float verdicts without an explicit error bound.
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub level: u32,
    pub grid: usize,
    pub budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { backend: None, tolerance: None, seed: 0, level: 5, grid: 2048, budget: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub report: InequalityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckOutcome {
    fn plain(report: InequalityReport) -> Self {
        CheckOutcome { report, detail: None }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable detail")
}

pub fn run_check(name: CheckName, file: &BodiesFile, opts: &RunOptions) -> Result<CheckOutcome> {
    let converted;
    let file = match opts.backend {
        Some(b) => {
            converted = file.to_backend(b)?;
            &converted
        }
        None => file,
    };
    let mut out = match name {
        CheckName::Bm => CheckOutcome::plain(check_bm(file.k()?, file.l()?, &file.t()?)?),
        CheckName::Mink1 => CheckOutcome::plain(check_minkowski_first(file.k_zonotope()?, file.l()?)?),
        CheckName::Mink2 => CheckOutcome::plain(check_minkowski_second(file.k_zonotope()?, file.l()?)?),
        CheckName::LocalLogbm => CheckOutcome::plain(check_local_logbm(file.k_zonotope()?, &file.f()?)?),
        CheckName::Logmink => CheckOutcome::plain(check_log_minkowski(file.k_zonotope()?, file.l()?)?),
        CheckName::Indstep => CheckOutcome::plain(check_induction_step(file.k_zonotope()?, &file.f()?, &file.u()?)?),
        CheckName::AlexandrovEq => alexandrov_eq(file)?,
        CheckName::Superlich => superlich(file, opts)?,
        CheckName::Bochner => bochner(file, opts)?,
        CheckName::Geomean => geomean(file, opts)?,
    };
    if let Some(tol) = opts.tolerance {
        out.report.reclassify(tol);
    }
    Ok(out)
}

/// `deficit = max discrepancy` between the two measures, so the verdict is
/// `equality` exactly when the measure condition holds.
fn alexandrov_eq(file: &BodiesFile) -> Result<CheckOutcome> {
    let k = file.k_zonotope()?;
    let m = check_alexandrov_condition(k, file.l()?)?;
    let report = InequalityReport::new(
        "alexandrov-eq",
        k.dim(),
        "measure",
        m.max_discrepancy.clone(),
        m.max_discrepancy.zero_like(),
    )
    .term("a", m.a.clone());
    Ok(CheckOutcome { report, detail: Some(to_value(&m)) })
}

fn smooth_l(file: &BodiesFile) -> Result<&SmoothBody> {
    match file.l()? {
        Body::Smooth(s) => Ok(s),
        other => Err(Error::Unsupported(format!("L must be a smooth body, found a {}", other.kind()))),
    }
}

/// `a` in `f = h_L - a·h_K`: the task's value, else `𝖵(L,K,…,K)/Vol(K)`
/// on the given discretization.
fn coefficient(file: &BodiesFile, v_lk_over_vol: impl FnOnce() -> Result<f64>) -> Result<f64> {
    match &file.task.a {
        Some(a) => Ok(a.to_f64()),
        None => v_lk_over_vol(),
    }
}

/// `(a, h_L - a·h_K)` for a smooth task on `S²`.
pub fn sphere_difference(file: &BodiesFile, q: &SphereQuadrature) -> Result<(f64, SmoothExpr)> {
    let k = file.k_smooth()?;
    let l = smooth_l(file)?;
    let a = coefficient(file, || {
        Ok(first_mixed_volume(k, &SmoothExpr::body(l), q)? / first_mixed_volume(k, &SmoothExpr::body(k), q)?)
    })?;
    Ok((a, SmoothExpr::difference(l, a, k)?))
}

fn superlich(file: &BodiesFile, opts: &RunOptions) -> Result<CheckOutcome> {
    let k = file.k_smooth()?;
    match k.dim() {
        2 => {
            let l = smooth_l(file)?;
            let op = CircleOperator::from_smooth(k, file.task.grid.unwrap_or(opts.grid))?;
            let hl: Vec<f64> = op.theta().iter().map(|t| l.support_f64(&[t.cos(), t.sin()])).collect();
            let a = coefficient(file, || Ok(op.inner(&hl, op.h()) / op.inner(op.h(), op.h())))?;
            let f: Vec<f64> = hl.iter().zip(op.h()).map(|(x, h)| x - a * h).collect();
            Ok(CheckOutcome::plain(check_superlich_circle(&op, &f).term("a", Scalar::float(a))))
        }
        3 => {
            let level = file.task.level.unwrap_or(opts.level);
            let (a, f) = sphere_difference(file, &SphereQuadrature::icosahedral(level))?;
            Ok(CheckOutcome::plain(check_superlich_quadrature(k, &f, level)?.term("a", Scalar::float(a))))
        }
        n => Err(Error::Unsupported(format!("superlich needs n = 2 or n = 3, found n = {n}"))),
    }
}

/// `⟨Af, Af⟩ - ⟨f, Af⟩ ≥ 0`, with the quadrature gap to the pointwise
/// mixed-discriminant integral as error bound.
fn bochner(file: &BodiesFile, opts: &RunOptions) -> Result<CheckOutcome> {
    let k = file.k_smooth()?;
    if k.dim() != 3 {
        return Err(Error::Unsupported(format!("bochner needs n = 3, found n = {}", k.dim())));
    }
    let level = file.task.level.unwrap_or(opts.level);
    let q = SphereQuadrature::icosahedral(level);
    let (a, f) = sphere_difference(file, &q)?;
    let r = bochner_residual(k, &f, &q)?;
    let bound = r.residual + 1e-10 * r.side1.abs().max(r.side2.abs());
    let report = InequalityReport::with_error_bound("bochner", 3, "quadrature", r.side1, 0.0, bound)
        .term("a", Scalar::float(a))
        .term("side2", Scalar::float(r.side2))
        .term("min_integrand", Scalar::float(r.min_integrand));
    Ok(CheckOutcome { report, detail: Some(to_value(&r)) })
}

/// `Vol(K^{1-t} L^t) ≥ Vol(K)^{1-t} Vol(L)^t`, tested on the certified upper
/// bound of the left side.
fn geomean(file: &BodiesFile, opts: &RunOptions) -> Result<CheckOutcome> {
    let (k, l, t) = (file.k()?, file.l()?, file.t()?);
    let budget = file.task.budget.unwrap_or(opts.budget);
    let mut rng = trial_rng(opts.seed, 0);
    let b = geomean_volume_bounds(k, l, &t, &[] as &[Vector], budget, &mut rng)?;
    let (vk, vl) = (k.volume()?.to_f64(), l.volume()?.to_f64());
    let tf = t.to_f64();
    let rhs = ((1.0 - tf) * vk.ln() + tf * vl.ln()).exp();
    let lhs = b.upper.to_f64();
    let bound = 1e-12 * lhs.abs().max(rhs.abs());
    let mut report = InequalityReport::with_error_bound("geomean", k.dim(), "upper-bound", lhs, rhs, bound)
        .term("lower", b.lower.clone())
        .term("upper", b.upper.clone());
    if b.lower.to_f64() >= rhs {
        report = report.note("certified: the lower bound already exceeds the right side");
    }
    Ok(CheckOutcome { report, detail: Some(to_value(&b)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{SymmetricPolytope, Zonotope};
    use crate::inequalities::Verdict;
    use crate::io::TaskJson;

    fn cube_cross() -> BodiesFile {
        let task = TaskJson { k: "K".into(), l: Some("L".into()), ..Default::default() };
        BodiesFile::pair(
            &Body::Zonotope(Zonotope::cube(3)),
            &Body::Polytope(SymmetricPolytope::cross_polytope(3)),
            task,
        )
    }

    #[test]
    fn names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
        }
        assert!("nope".parse::<CheckName>().is_err());
    }

    #[test]
    fn dispatches_local_logbm() {
        let out = run_check(CheckName::LocalLogbm, &cube_cross(), &RunOptions::default()).unwrap();
        assert_eq!(out.report.lhs, Scalar::int(8));
        assert_eq!(out.report.rhs, Scalar::ratio(16, 3));
        assert_eq!(out.report.verdict, Verdict::Holds);
    }

    #[test]
    fn alexandrov_eq_is_not_equality_for_cross() {
        let out = run_check(CheckName::AlexandrovEq, &cube_cross(), &RunOptions::default()).unwrap();
        assert_eq!(out.report.verdict, Verdict::Holds);
    }

    #[test]
    fn smooth_checks_need_smooth_k() {
        let err = run_check(CheckName::Superlich, &cube_cross(), &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn superlich_on_ellipses() {
        let k = SmoothBody::axis_ellipsoid(&[1.0, 2.0]).unwrap();
        let l = SmoothBody::axis_ellipsoid(&[3.0, 1.0]).unwrap();
        let task = TaskJson { k: "K".into(), l: Some("L".into()), grid: Some(256), ..Default::default() };
        let file = BodiesFile::pair(&Body::Smooth(k), &Body::Smooth(l), task);
        let out = run_check(CheckName::Superlich, &file, &RunOptions::default()).unwrap();
        assert!(!out.report.verdict.is_violation());
    }
}
