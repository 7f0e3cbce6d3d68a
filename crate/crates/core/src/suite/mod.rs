//! Check dispatch by name, seeded random instances, and the random suite.

mod check;
mod random;
mod witness;

pub use check::{run_check, sphere_difference, CheckName, CheckOutcome, RunOptions};
pub use random::*;
pub use witness::minimize_witness;

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Backend, Scalar};
use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::inequalities::Verdict;
use crate::io::{BodiesFile, BodiesFileJson, TaskJson};

/// Reproducible given `(seed, config)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_generators: usize,
    pub max_vertex_pairs: usize,
    /// Coordinate bound for random integer generators and vertices.
    pub bound: i64,
    pub backend: Backend,
    pub tolerance: Option<f64>,
    pub checks: Vec<CheckName>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: 100,
            min_dim: 3,
            max_dim: 4,
            max_generators: 6,
            max_vertex_pairs: 5,
            bound: 5,
            backend: Backend::Exact,
            tolerance: None,
            checks: vec![CheckName::Bm, CheckName::Mink1, CheckName::Mink2, CheckName::LocalLogbm, CheckName::Indstep],
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.min_dim) || !(self.min_dim..=4).contains(&self.max_dim) {
            return Err(Error::Precondition(format!(
                "dimension range {}..={} must lie within 2..=4",
                self.min_dim, self.max_dim
            )));
        }
        if self.bound < 1 {
            return Err(Error::Precondition("coordinate bound must be positive".into()));
        }
        for c in &self.checks {
            if matches!(c, CheckName::Superlich | CheckName::Bochner | CheckName::Logmink | CheckName::AlexandrovEq) {
                return Err(Error::Unsupported(format!("`{c}` is not part of the random inequality suite")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub check: CheckName,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub runs: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_deficit: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_deficit_trial: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub check: CheckName,
    pub instance: BodiesFileJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub violations: usize,
    pub summary: BTreeMap<CheckName, CheckSummary>,
    pub records: Vec<TrialRecord>,
    pub witnesses: Vec<Witness>,
}

/// The instance of trial `index`: `K` a zonotope; `L` a zonotope for even
/// trials and a symmetric polytope for odd ones (`bm` always gets a
/// zonotope pair); `t` and `u` random.
pub fn suite_instances(config: &SuiteConfig, index: usize) -> (BodiesFile, BodiesFile) {
    let mut rng = trial_rng(config.seed, index as u64);
    let n = rng.random_range(config.min_dim..=config.max_dim);
    let k = random_zonotope(&mut rng, n, config.max_generators, config.bound, false);
    let lz = random_zonotope(&mut rng, n, config.max_generators, config.bound, false);
    let lp = random_polytope(&mut rng, n, config.max_vertex_pairs, config.bound.min(3));
    let t = random_t(&mut rng);
    let u = random_int_vector(&mut rng, n, config.bound);
    let task = TaskJson { k: "K".into(), l: Some("L".into()), t: Some(t), u: Some(u), ..Default::default() };
    let k = Body::Zonotope(k);
    let zon = BodiesFile::pair(&k, &Body::Zonotope(lz), task.clone());
    let main = if index.is_multiple_of(2) { zon.clone() } else { BodiesFile::pair(&k, &Body::Polytope(lp), task) };
    (zon, main)
}

fn options(config: &SuiteConfig) -> RunOptions {
    RunOptions { backend: Some(config.backend), tolerance: config.tolerance, seed: config.seed, ..RunOptions::default() }
}

fn is_violated(check: CheckName, file: &BodiesFile, opts: &RunOptions) -> bool {
    matches!(run_check(check, file, opts), Ok(o) if o.report.verdict.is_violation())
}

/// Runs every configured check on every trial. Trials run in parallel; the
/// report is assembled in trial order, so it does not depend on the thread
/// count.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let opts = options(config);
    let per_trial: Vec<(Vec<TrialRecord>, Vec<Witness>)> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let (zon, main) = suite_instances(config, i);
            let mut records = Vec::new();
            let mut witnesses = Vec::new();
            for &check in &config.checks {
                let file = if check == CheckName::Bm { &zon } else { &main };
                if check == CheckName::Indstep && file.dim < 3 {
                    continue;
                }
                let mut rec = TrialRecord { trial: i, check, n: file.dim, verdict: None, deficit: None, error: None };
                match run_check(check, file, &opts) {
                    Ok(out) => {
                        rec.verdict = Some(out.report.verdict);
                        rec.deficit = Some(out.report.deficit);
                        if out.report.verdict.is_violation() {
                            let small = minimize_witness(file, |f| is_violated(check, f, &opts));
                            witnesses.push(Witness { trial: i, check, instance: small.to_json() });
                        }
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
                records.push(rec);
            }
            (records, witnesses)
        })
        .collect();

    let mut summary: BTreeMap<CheckName, CheckSummary> =
        config.checks.iter().map(|&c| (c, CheckSummary::default())).collect();
    let mut records = Vec::new();
    let mut witnesses = Vec::new();
    for (recs, wits) in per_trial {
        for r in &recs {
            let s = summary.get_mut(&r.check).expect("configured check");
            s.runs += 1;
            match r.verdict {
                Some(Verdict::Holds) => s.holds += 1,
                Some(Verdict::Equality) => s.equality += 1,
                Some(Verdict::Violated) => s.violated += 1,
                None => s.errors += 1,
            }
            if let Some(d) = &r.deficit {
                let smaller = s.min_deficit.as_ref().is_none_or(|m| d.total_cmp(m).is_lt());
                if smaller {
                    s.min_deficit = Some(d.clone());
                    s.min_deficit_trial = Some(r.trial);
                }
            }
        }
        records.extend(recs);
        witnesses.extend(wits);
    }
    let violations = summary.values().map(|s| s.violated).sum();
    Ok(SuiteReport { config: config.clone(), violations, summary, records, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_empty() {
        let r = run_suite(&SuiteConfig { trials: 0, ..SuiteConfig::default() }).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.records.is_empty());
        assert!(r.summary.values().all(|s| s.runs == 0 && s.min_deficit.is_none()));
    }

    #[test]
    fn small_suite_is_clean_and_reproducible() {
        let cfg = SuiteConfig { trials: 6, seed: 5, ..SuiteConfig::default() };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.violations, 0);
        assert!(a.records.iter().all(|r| r.error.is_none()), "{:?}", a.records);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(run_suite(&SuiteConfig { min_dim: 1, ..SuiteConfig::default() }).is_err());
        assert!(run_suite(&SuiteConfig { checks: vec![CheckName::Bochner], ..SuiteConfig::default() }).is_err());
    }
}
