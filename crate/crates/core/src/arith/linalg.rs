//! Determinants, generalized cross products, ranks and orthogonal complements
//! over [`Scalar`], plus exact root bounds for rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;
use super::vector::Vector;

const FLOAT_PIVOT_TOL: f64 = 1e-12;

/// Determinant of the square matrix whose rows are `rows`.
///
/// Dimensions up to 4 use cofactor expansion on either backend. Larger exact
/// matrices go through fraction-free (Bareiss) elimination on the integer
/// matrix obtained by clearing row denominators; larger float matrices use
/// partially pivoted LU.
pub fn det(rows: &[Vector]) -> Scalar {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.dim() == n), "det needs a square matrix");
    let entries: Vec<&[Scalar]> = rows.iter().map(|r| r.coords()).collect();
    match n {
        0 => Scalar::one(),
        1 => entries[0][0].clone(),
        2 => det2(&entries[0][0], &entries[0][1], &entries[1][0], &entries[1][1]),
        3 => det3(&entries),
        4 => det4(&entries),
        _ if rows.iter().all(Vector::is_exact) => det_bareiss(rows),
        _ => det_float(rows),
    }
}

fn det2(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
    a * d - b * c
}

fn det3(m: &[&[Scalar]]) -> Scalar {
    let c0 = det2(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let c1 = det2(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let c2 = det2(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &m[0][0] * &c0 - &m[0][1] * &c1 + &m[0][2] * &c2
}

fn det4(m: &[&[Scalar]]) -> Scalar {
    let mut acc = Scalar::zero();
    for col in 0..4 {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Scalar>> = (1..4)
            .map(|r| (0..4).filter(|&c| c != col).map(|c| m[r][c].clone()).collect())
            .collect();
        let minor_refs: Vec<&[Scalar]> = minor.iter().map(Vec::as_slice).collect();
        let term = &m[0][col] * &det3(&minor_refs);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn det_bareiss(rows: &[Vector]) -> Scalar {
    let n = rows.len();
    let mut scale = BigRational::one();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let rats: Vec<&BigRational> = r.iter().map(|s| s.as_rational().unwrap()).collect();
            let lcm = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale /= BigRational::from_integer(lcm.clone());
            rats.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Scalar::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Scalar::Exact(BigRational::from_integer(sign * &a[n - 1][n - 1]) * scale)
}

fn det_float(rows: &[Vector]) -> Scalar {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(Vector::to_f64s).collect();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 {
            return Scalar::Float(0.0);
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    Scalar::Float(d)
}

/// The vector `w` with `⟨w, x⟩ = det(v_1, …, v_{n-1}, x)` for all `x`.
///
/// `w` is orthogonal to every `v_i`, its length is the (n-1)-volume of the
/// parallelepiped they span, and it vanishes iff they are dependent.
pub fn generalized_cross(rows: &[Vector]) -> Vector {
    let n = rows.len() + 1;
    assert!(rows.iter().all(|r| r.dim() == n), "generalized_cross needs n-1 vectors in R^n");
    let mut w = Vec::with_capacity(n);
    for col in 0..n {
        let minor: Vec<Vector> = rows
            .iter()
            .map(|r| Vector((0..n).filter(|&c| c != col).map(|c| r[c].clone()).collect()))
            .collect();
        let d = det(&minor);
        // cofactor sign (-1)^{n + col + 1} for expansion along the last row
        if (n + col + 1).is_multiple_of(2) {
            w.push(d);
        } else {
            w.push(-d);
        }
    }
    Vector(w)
}

/// Reduced row echelon form; returns the pivot columns. Exact entries use
/// exact zero tests, float entries a relative pivot tolerance.
fn rref(m: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let exact = m.iter().flatten().all(Scalar::is_exact);
    let scale = if exact {
        0.0
    } else {
        m.iter().flatten().map(|s| s.to_f64().abs()).fold(0.0, f64::max).max(1e-300)
    };
    let is_zero = |s: &Scalar| {
        if exact {
            s.is_zero()
        } else {
            s.to_f64().abs() <= FLOAT_PIVOT_TOL * scale
        }
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let pick = if exact {
            (row..m.len()).find(|&i| !m[i][col].is_zero())
        } else {
            (row..m.len())
                .max_by(|&i, &j| m[i][col].to_f64().abs().total_cmp(&m[j][col].to_f64().abs()))
                .filter(|&i| !is_zero(&m[i][col]))
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip().expect("nonzero pivot");
        for c in col..cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..cols {
                    let v = &m[row][c] * &f;
                    m[i][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of the span of `rows`.
pub fn rank(rows: &[Vector]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.dim();
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.0.clone()).collect();
    rref(&mut m, cols).len()
}

/// A basis of the orthogonal complement of `span(rows)` in `R^dim`.
pub fn orthogonal_complement(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.0.clone()).collect();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m, dim) };
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); dim];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[r][f];
            }
            Vector(v)
        })
        .collect()
}

/// Gram determinant `det(⟨v_i, v_j⟩)`: the squared volume of the
/// parallelepiped spanned by `rows`.
pub fn gram_det(rows: &[Vector]) -> Scalar {
    let gram: Vec<Vector> = rows
        .iter()
        .map(|a| Vector(rows.iter().map(|b| a.dot(b)).collect()))
        .collect();
    det(&gram)
}

/// `r^{1/n}` if it is rational.
pub fn exact_nth_root(r: &BigRational, n: u32) -> Option<BigRational> {
    if r.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root_int = |x: &BigInt| -> Option<BigInt> {
        let y = x.nth_root(n);
        (num_traits::pow(y.clone(), n as usize) == *x).then_some(y)
    };
    Some(BigRational::new(root_int(r.numer())?, root_int(r.denom())?))
}

pub fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    exact_nth_root(r, 2)
}

/// Dyadic bounds `lo ≤ r^{1/n} ≤ hi` with `hi - lo = 2^{-bits}`, for `r ≥ 0`.
pub fn nth_root_bounds(r: &BigRational, n: u32, bits: u32) -> (BigRational, BigRational) {
    assert!(!r.is_negative(), "nth_root_bounds needs r >= 0");
    let shift = BigInt::one() << (bits as usize * n as usize);
    let scaled = (r * BigRational::from_integer(shift)).floor().to_integer();
    let root = match scaled.sign() {
        Sign::Minus => unreachable!(),
        _ => scaled.nth_root(n),
    };
    let denom = BigInt::one() << bits as usize;
    let lo = BigRational::new(root.clone(), denom.clone());
    let hi = BigRational::new(root + 1, denom);
    (lo, hi)
}
