use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::Scalar;

/// Relative band used to classify float deficits unless overridden.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
}

impl Verdict {
    pub fn is_violation(self) -> bool {
        self == Verdict::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        }
    }
}

/// Outcome of one inequality check `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub n: usize,
    pub form: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub deficit: Scalar,
    pub verdict: Verdict,
    /// Whether the verdict was decided in exact arithmetic.
    pub exact: bool,
    /// Absolute error bound behind a float verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub terms: BTreeMap<String, Scalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl InequalityReport {
    /// Classifies `lhs - rhs`: by sign when both sides are exact, otherwise
    /// within `DEFAULT_FLOAT_TOLERANCE` relative to the magnitudes involved.
    pub fn new(name: &str, n: usize, form: &str, lhs: Scalar, rhs: Scalar) -> Self {
        let deficit = &lhs - &rhs;
        let exact = deficit.is_exact();
        let mut r = InequalityReport {
            name: name.to_string(),
            n,
            form: form.to_string(),
            lhs,
            rhs,
            deficit,
            verdict: Verdict::Equality,
            exact,
            error_bound: None,
            terms: BTreeMap::new(),
            notes: Vec::new(),
        };
        r.reclassify(DEFAULT_FLOAT_TOLERANCE);
        r
    }

    /// A float verdict with an explicit absolute error bound.
    pub fn with_error_bound(name: &str, n: usize, form: &str, lhs: f64, rhs: f64, bound: f64) -> Self {
        let deficit = lhs - rhs;
        let verdict = classify_float(deficit, bound);
        InequalityReport {
            name: name.to_string(),
            n,
            form: form.to_string(),
            lhs: Scalar::float(lhs),
            rhs: Scalar::float(rhs),
            deficit: Scalar::float(deficit),
            verdict,
            exact: false,
            error_bound: Some(bound),
            terms: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Re-derives a float verdict under a new relative tolerance. Exact
    /// verdicts and verdicts with an explicit error bound are unaffected.
    pub fn reclassify(&mut self, rel_tol: f64) {
        if self.exact {
            self.verdict = match self.deficit.signum() {
                1 => Verdict::Holds,
                0 => Verdict::Equality,
                _ => Verdict::Violated,
            };
        } else if self.error_bound.is_none() {
            let scale = self.lhs.to_f64().abs().max(self.rhs.to_f64().abs()).max(1.0);
            self.verdict = classify_float(self.deficit.to_f64(), rel_tol * scale);
        }
    }

    pub fn term(mut self, key: &str, value: Scalar) -> Self {
        self.terms.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn csv_record(&self) -> CsvRecord {
        CsvRecord {
            name: self.name.clone(),
            n: self.n,
            verdict: self.verdict.as_str().to_string(),
            deficit_float: self.deficit.to_f64(),
            deficit_exact: if self.deficit.is_exact() { self.deficit.to_string() } else { String::new() },
        }
    }
}

fn classify_float(deficit: f64, band: f64) -> Verdict {
    if deficit.is_nan() {
        Verdict::Violated
    } else if deficit.abs() <= band {
        Verdict::Equality
    } else if deficit > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// The fixed CSV row: `name,n,verdict,deficit_float,deficit_exact`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub name: String,
    pub n: usize,
    pub verdict: String,
    pub deficit_float: f64,
    pub deficit_exact: String,
}
