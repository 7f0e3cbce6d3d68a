use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::arith::{det, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

use super::report::InequalityReport;

/// A symmetric square matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vector>", into = "Vec<Vector>")]
pub struct SymmetricMatrix {
    rows: Vec<Vector>,
}

impl SymmetricMatrix {
    pub fn new(rows: Vec<Vector>) -> Result<Self> {
        let m = rows.len();
        for r in &rows {
            check_dim(m, r.dim())?;
        }
        for i in 0..m {
            for j in i + 1..m {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Precondition(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymmetricMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Vector::from_ints(r)).collect())
    }

    pub fn identity(m: usize) -> Self {
        SymmetricMatrix { rows: (0..m).map(|i| Vector::unit(m, i)).collect() }
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let m = d.len();
        let rows = (0..m)
            .map(|i| Vector::new((0..m).map(|j| if i == j { d[i].clone() } else { Scalar::zero() }).collect()))
            .collect();
        SymmetricMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn det(&self) -> Scalar {
        det(&self.rows)
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        check_dim(self.size(), other.size())?;
        Ok(SymmetricMatrix { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a + b).collect() })
    }

    pub fn scaled(&self, s: &Scalar) -> SymmetricMatrix {
        SymmetricMatrix { rows: self.rows.iter().map(|r| r.scale(s)).collect() }
    }

    fn principal_minor(&self, idx: &[usize]) -> Scalar {
        let sub: Vec<Vector> = idx
            .iter()
            .map(|&i| Vector::new(idx.iter().map(|&j| self.rows[i][j].clone()).collect()))
            .collect();
        det(&sub)
    }

    /// Positive semidefinite iff every principal minor is nonnegative.
    pub fn is_psd(&self) -> bool {
        let m = self.size();
        (1..=m).all(|k| (0..m).combinations(k).all(|idx| !self.principal_minor(&idx).is_negative()))
    }
}

impl TryFrom<Vec<Vector>> for SymmetricMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vector>) -> Result<Self> {
        SymmetricMatrix::new(rows)
    }
}

impl From<SymmetricMatrix> for Vec<Vector> {
    fn from(m: SymmetricMatrix) -> Self {
        m.rows
    }
}

/// `𝖣(A_1, …, A_m)` by polarization,
/// `(1/m!) Σ_{S ⊆ [m]} (-1)^{m-|S|} det(Σ_{i∈S} A_i)`.
pub fn mixed_discriminant(tuple: &[SymmetricMatrix]) -> Result<Scalar> {
    let m = tuple.len();
    if m == 0 {
        return Ok(Scalar::one());
    }
    for a in tuple {
        check_dim(m, a.size())?;
    }
    let zero = SymmetricMatrix { rows: vec![Vector::zeros(m); m] };
    let mut acc = Scalar::zero();
    for subset in tuple.iter().powerset() {
        if subset.is_empty() {
            continue;
        }
        let mut sum = zero.clone();
        for a in &subset {
            sum = sum.add(a)?;
        }
        let d = sum.det();
        if (m - subset.len()).is_multiple_of(2) {
            acc += d;
        } else {
            acc -= d;
        }
    }
    let fact: i64 = (1..=m as i64).product();
    Ok(acc / Scalar::int(fact))
}

/// `𝖣(A,B,M…)² ≥ 𝖣(A,A,M…) 𝖣(B,B,M…)` for symmetric `A` and
/// positive semidefinite `B`, `M_i`.
pub fn check_alexandrov_mixed_discriminant(
    a: &SymmetricMatrix,
    b: &SymmetricMatrix,
    ms: &[SymmetricMatrix],
) -> Result<InequalityReport> {
    let m = a.size();
    if m < 2 {
        return Err(Error::Precondition("needs matrices of size at least 2".into()));
    }
    check_dim(m, b.size())?;
    check_dim(m - 2, ms.len())?;
    if !b.is_psd() {
        return Err(Error::Precondition("B is not positive semidefinite".into()));
    }
    if let Some(i) = ms.iter().position(|x| !x.is_psd()) {
        return Err(Error::Precondition(format!("M_{} is not positive semidefinite", i + 1)));
    }
    let with = |x: &SymmetricMatrix, y: &SymmetricMatrix| {
        let mut t = vec![x.clone(), y.clone()];
        t.extend(ms.iter().cloned());
        mixed_discriminant(&t)
    };
    let d_ab = with(a, b)?;
    let d_aa = with(a, a)?;
    let d_bb = with(b, b)?;
    let lhs = d_ab.pow(2);
    let rhs = &d_aa * &d_bb;
    Ok(InequalityReport::new("alexandrov-discriminant", m + 1, "plain", lhs, rhs)
        .term("d_ab", d_ab)
        .term("d_aa", d_aa)
        .term("d_bb", d_bb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::Verdict;

    #[test]
    fn small_cases() {
        let i2 = SymmetricMatrix::identity(2);
        assert_eq!(mixed_discriminant(&[i2.clone(), i2.clone()]).unwrap(), Scalar::one());
        let a = SymmetricMatrix::from_ints(&[&[7]]).unwrap();
        assert_eq!(mixed_discriminant(&[a]).unwrap(), Scalar::int(7));
        let d = SymmetricMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]).unwrap();
        assert_eq!(mixed_discriminant(&[d.clone(), d.clone(), d.clone()]).unwrap(), d.det());
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(SymmetricMatrix::from_ints(&[&[1, 2], &[3, 4]]).is_err());
    }

    #[test]
    fn alexandrov_examples() {
        let a = SymmetricMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap();
        let b = SymmetricMatrix::identity(2);
        let r = check_alexandrov_mixed_discriminant(&a, &b, &[]).unwrap();
        assert_eq!(r.lhs, Scalar::zero());
        assert_eq!(r.rhs, Scalar::int(-1));
        assert_eq!(r.verdict, Verdict::Holds);
        let e = check_alexandrov_mixed_discriminant(&b, &b, &[]).unwrap();
        assert_eq!(e.verdict, Verdict::Equality);
        assert!(check_alexandrov_mixed_discriminant(&b, &a, &[]).is_err());
    }

    #[test]
    fn psd_detection() {
        assert!(SymmetricMatrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap().is_psd());
        assert!(!SymmetricMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap().is_psd());
        assert!(!SymmetricMatrix::from_ints(&[&[0, 0], &[0, -1]]).unwrap().is_psd());
    }
}
