use crate::arith::{Scalar, Vector};
use crate::bodies::{Body, SupportExpr, Zonotope};
use crate::error::{check_dim, Error, Result};
use crate::mixedvol::{mixed_area_measure, mixed_volume, AtomicSphericalMeasure, Slot};

use super::classical::body_volume;
use super::report::InequalityReport;

/// `(1/n) ∫ f dS` over a length-weighted measure.
pub fn integrate_expr(s: &AtomicSphericalMeasure, f: &SupportExpr) -> Result<Scalar> {
    let n = Scalar::int(s.dim() as i64);
    Ok(s.integrate_homogeneous(|w| f.eval(w))? / n)
}

/// `∫ f²/h_K dS = Σ c·f(w)²/h_K(w)`.
pub fn integrate_sq_over_support(s: &AtomicSphericalMeasure, f: &SupportExpr, k: &Zonotope) -> Result<Scalar> {
    s.integrate_homogeneous(|w| {
        let hk = k.support(w)?;
        if hk.is_zero() {
            return Err(Error::Degenerate("h_K vanishes at an atom".into()));
        }
        Ok(f.eval(w)?.pow(2) / hk)
    })
}

/// `𝖵(f, f, C_1, …, C_{n-2})`, expanded as `Σ_j α_j (1/n) ∫ f dS_{B_j, C…}`.
pub fn mixed_volume_ff(f: &SupportExpr, others: &[Slot]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (alpha, b) in f.terms() {
        if alpha.is_zero() {
            continue;
        }
        let mut slots = vec![Slot::try_from(b)?];
        slots.extend(others.iter().cloned());
        let s = mixed_area_measure(&slots)?;
        acc += alpha * &integrate_expr(&s, f)?;
    }
    Ok(acc)
}

/// `𝖵(f, C_1, …, C_{n-1})` by linearity.
pub fn mixed_volume_f(f: &SupportExpr, others: &[Slot]) -> Result<Scalar> {
    integrate_expr(&mixed_area_measure(others)?, f)
}

fn validate_expr(f: &SupportExpr, n: usize) -> Result<()> {
    check_dim(n, f.dim())?;
    if f.has_smooth() {
        return Err(Error::Unsupported(
            "smooth bodies in f need the spectral module, not the exact engine".into(),
        ));
    }
    Ok(())
}

fn k_slots(k: &Zonotope, count: usize) -> Vec<Slot> {
    vec![Slot::Zonotope(k.clone()); count]
}

/// Number of atoms of `s` at which `f` is not positive, when `f` is a single
/// body (a lower-dimensional `L` shows up this way).
fn degenerate_atoms(s: &AtomicSphericalMeasure, f: &SupportExpr) -> Result<usize> {
    if f.terms().len() != 1 || !f.terms()[0].0.is_positive() {
        return Ok(0);
    }
    let mut count = 0;
    for a in s.atoms() {
        if !f.eval(&a.w)?.is_positive() {
            count += 1;
        }
    }
    Ok(count)
}

/// The local log-Brunn-Minkowski inequality for a zonotope `K`,
/// `𝖵(f,K,…,K)²/Vol(K) ≥ ((n-1)/n) 𝖵(f,f,K,…,K) + (1/n²) ∫ f²/h_K dS_{K,…,K}`.
pub fn check_local_logbm(k: &Zonotope, f: &SupportExpr) -> Result<InequalityReport> {
    let n = k.dim();
    validate_expr(f, n)?;
    if n < 2 {
        return Err(Error::Precondition("local log-Brunn-Minkowski needs n >= 2".into()));
    }
    let vk = k.volume();
    if vk.is_zero() {
        return Err(Error::Precondition("K must be full-dimensional".into()));
    }
    let nn = Scalar::int(n as i64);
    let s_k = mixed_area_measure(&k_slots(k, n - 1))?;
    let v_f = integrate_expr(&s_k, f)?;
    let v_ff = mixed_volume_ff(f, &k_slots(k, n - 2))?;
    let int_sq = integrate_sq_over_support(&s_k, f, k)?;

    let lhs = v_f.pow(2) / vk.clone();
    let rhs = &(&(&nn - &Scalar::one()) / &nn) * &v_ff + int_sq.clone() / nn.pow(2);
    let mut r = InequalityReport::new("local-logbm", n, "plain", lhs, rhs)
        .term("vol_k", vk)
        .term("v_f_k", v_f)
        .term("v_f_f_k", v_ff)
        .term("int_f2_over_hk", int_sq);
    let degenerate = degenerate_atoms(&s_k, f)?;
    if degenerate > 0 {
        r = r.note(format!(
            "L is degenerate: h_L vanishes at {degenerate} atoms of S_K; outside the tested regime"
        ));
    }
    Ok(r)
}

/// The induction-step inequality with an extra segment slot `[-u, u]`:
/// `𝖵(s,f,K…)²/𝖵(s,K,…,K) ≥ ((n-2)/(n-1)) 𝖵(s,f,f,K…) + (1/(n(n-1))) ∫ f²/h_K dS_{s,K,…,K}`.
pub fn check_induction_step(k: &Zonotope, f: &SupportExpr, u: &Vector) -> Result<InequalityReport> {
    let n = k.dim();
    validate_expr(f, n)?;
    check_dim(n, u.dim())?;
    if n < 3 {
        return Err(Error::Precondition("the induction step needs n >= 3".into()));
    }
    let seg = Slot::segment(u.clone(), Scalar::one())?;
    let nn = Scalar::int(n as i64);
    let n1 = Scalar::int(n as i64 - 1);

    let mut den_slots = vec![seg.clone()];
    den_slots.extend(k_slots(k, n - 1));
    let v_s = mixed_volume(&den_slots)?;
    if !v_s.is_positive() {
        return Err(Error::Degenerate("𝖵([-u,u], K, …, K) vanishes".into()));
    }
    let mut meas_slots = vec![seg.clone()];
    meas_slots.extend(k_slots(k, n - 2));
    let s_sk = mixed_area_measure(&meas_slots)?;
    let v_sf = integrate_expr(&s_sk, f)?;
    let mut ff_slots = vec![seg];
    ff_slots.extend(k_slots(k, n - 3));
    let v_sff = mixed_volume_ff(f, &ff_slots)?;
    let int_sq = integrate_sq_over_support(&s_sk, f, k)?;

    let lhs = v_sf.pow(2) / v_s.clone();
    let rhs = &(&(&nn - &Scalar::int(2)) / &n1) * &v_sff + int_sq.clone() / (&nn * &n1);
    Ok(InequalityReport::new("indstep", n, "plain", lhs, rhs)
        .term("v_s_k", v_s)
        .term("v_s_f_k", v_sf)
        .term("v_s_f_f_k", v_sff)
        .term("int_f2_over_hk", int_sq))
}

/// The logarithmic Minkowski inequality,
/// `∫ h_K log(h_L/h_K) dS_{K,…,K} ≥ Vol(K) log(Vol(L)/Vol(K))`.
///
/// Atom data are exact; logarithms are taken in double precision and the
/// verdict uses a worst-case rounding bound accumulated term by term.
pub fn check_log_minkowski(k: &Zonotope, l: &Body) -> Result<InequalityReport> {
    let n = k.dim();
    check_dim(n, l.dim())?;
    if !k.is_full_dimensional() {
        return Err(Error::Precondition("K must be full-dimensional".into()));
    }
    let s_k = mixed_area_measure(&k_slots(k, n - 1))?;
    let u = f64::EPSILON;
    let mut lhs = 0.0;
    let mut bound = 0.0;
    let mut all_ratios_one = true;
    for a in s_k.atoms() {
        let hk = k.support(&a.w)?;
        let hl = l.support(&a.w)?;
        if !hl.is_positive() {
            return Err(Error::Precondition(
                "L must be full-dimensional: h_L vanishes at an atom of S_K".into(),
            ));
        }
        let ratio = &hl / &hk;
        all_ratios_one &= ratio == Scalar::one();
        let weight = (&a.c * &hk).to_f64();
        let log = ratio.to_f64().ln();
        let term = weight * log;
        lhs += term;
        // ratio and weight rounding, the log itself, and the product
        bound += weight.abs() * (2.0 * u + 2.0 * u * log.abs()) + term.abs() * 2.0 * u;
    }
    let vk = k.volume();
    let vl = body_volume(l)?;
    if !vl.is_positive() {
        return Err(Error::Precondition("L must be full-dimensional".into()));
    }
    let vol_ratio = &vl / &vk;
    let log_v = vol_ratio.to_f64().ln();
    let rhs = vk.to_f64() * log_v;
    bound += vk.to_f64().abs() * (2.0 * u + 2.0 * u * log_v.abs()) + rhs.abs() * 2.0 * u;
    // summation
    bound += (s_k.len() as f64 + 1.0) * u * (lhs.abs() + bound);
    if all_ratios_one {
        lhs = 0.0;
    }
    if vol_ratio == Scalar::one() {
        bound = if all_ratios_one { 0.0 } else { bound };
    }
    let rhs = if vol_ratio == Scalar::one() { 0.0 } else { rhs };
    Ok(InequalityReport::with_error_bound("logmink", n, "float with rounding bound", lhs, rhs, bound)
        .term("vol_k", vk)
        .term("vol_l", vl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::SymmetricPolytope;
    use crate::inequalities::Verdict;

    fn cube() -> Zonotope {
        Zonotope::cube(3)
    }

    fn box123() -> Zonotope {
        Zonotope::boxed(&[Scalar::int(1), Scalar::int(2), Scalar::int(3)]).unwrap()
    }

    #[test]
    fn box_is_an_equality_case() {
        let r = check_local_logbm(&cube(), &SupportExpr::body(box123())).unwrap();
        assert_eq!(r.lhs, Scalar::int(32));
        assert_eq!(r.rhs, Scalar::int(32));
        assert_eq!(r.verdict, Verdict::Equality);
        assert_eq!(r.terms["v_f_k"], Scalar::int(16));
        assert_eq!(r.terms["v_f_f_k"], Scalar::ratio(88, 3));
        assert_eq!(r.terms["int_f2_over_hk"], Scalar::int(112));
    }

    #[test]
    fn cross_polytope_is_strict() {
        let l = SymmetricPolytope::cross_polytope(3);
        let r = check_local_logbm(&cube(), &SupportExpr::body(l)).unwrap();
        assert_eq!(r.lhs, Scalar::int(8));
        assert_eq!(r.rhs, Scalar::ratio(16, 3));
        assert_eq!(r.deficit, Scalar::ratio(8, 3));
        assert_eq!(r.terms["int_f2_over_hk"], Scalar::int(24));
    }

    #[test]
    fn f_equal_hk_is_equality_with_volume_on_both_sides() {
        let r = check_local_logbm(&cube(), &SupportExpr::body(cube())).unwrap();
        assert_eq!(r.lhs, Scalar::int(8));
        assert_eq!(r.rhs, Scalar::int(8));
    }

    #[test]
    fn induction_step_cases() {
        let e = check_induction_step(&cube(), &SupportExpr::body(cube()), &Vector::unit(3, 0)).unwrap();
        assert_eq!(e.verdict, Verdict::Equality);
        let l = SymmetricPolytope::cross_polytope(3);
        let h = check_induction_step(&cube(), &SupportExpr::body(l), &Vector::unit(3, 0)).unwrap();
        assert_ne!(h.verdict, Verdict::Violated);
        let b = check_induction_step(&cube(), &SupportExpr::body(box123()), &Vector::unit(3, 0)).unwrap();
        assert_eq!(b.verdict, Verdict::Equality);
    }

    #[test]
    fn log_minkowski_cases() {
        let k = cube();
        let same = check_log_minkowski(&k, &Body::Zonotope(k.clone())).unwrap();
        assert_eq!(same.verdict, Verdict::Equality);
        let twice = check_log_minkowski(&k, &Body::Zonotope(k.scaled(&Scalar::int(2)).unwrap())).unwrap();
        assert_eq!(twice.verdict, Verdict::Equality);
        let cross = check_log_minkowski(&k, &Body::Polytope(SymmetricPolytope::cross_polytope(3))).unwrap();
        assert_eq!(cross.lhs, Scalar::float(0.0));
        assert!((cross.rhs.to_f64() - 8.0 * (1.0f64 / 6.0).ln()).abs() < 1e-12);
        assert_eq!(cross.verdict, Verdict::Holds);
    }
}
