use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use logbm_core::equality::{certify_equality, EqualityOutcome};
use logbm_core::inequalities::Verdict;
use logbm_core::mixedvol::{cone_volume_measure, mixed_area_measure, surface_area_measure, Slot};
use logbm_core::spectral::{bochner_convergence, circle_spectrum, planar_generating_measure, SphereQuadrature};
use logbm_core::suite::{run_check, run_suite, sphere_difference, CheckName, RunOptions, SuiteConfig, TrialRecord};
use logbm_core::Error;
use serde::Serialize;

use crate::output::{out_file, read_bodies, write_csv, write_json, CliError, EXIT_OK, EXIT_VIOLATED};
use crate::Common;

pub const REPORT_COLUMNS: [&str; 5] = ["name", "n", "verdict", "deficit_float", "deficit_exact"];
pub const SUITE_COLUMNS: [&str; 7] = ["trial", "check", "n", "verdict", "deficit_float", "deficit_exact", "error"];
pub const SPECTRUM_COLUMNS: [&str; 3] = ["index", "parity", "eigenvalue"];
pub const BOCHNER_COLUMNS: [&str; 6] = ["level", "nodes", "side1", "side2", "residual", "min_integrand"];

pub fn check(
    name: CheckName,
    path: &Path,
    common: &Common,
    level: Option<u32>,
    grid: Option<usize>,
    budget: Option<usize>,
) -> Result<u8, CliError> {
    let mut file = read_bodies(path)?;
    file.task.level = level.or(file.task.level);
    file.task.grid = grid.or(file.task.grid);
    file.task.budget = budget.or(file.task.budget);
    let opts = RunOptions { backend: common.backend, tolerance: common.tolerance, seed: common.seed, ..RunOptions::default() };
    let outcome = run_check(name, &file, &opts)?;
    let r = &outcome.report;

    let json = out_file(&common.out, &format!("{name}.json"))?;
    let csv = out_file(&common.out, &format!("{name}.csv"))?;
    write_json(&json, &outcome)?;
    write_csv(&csv, &REPORT_COLUMNS, &[r.csv_record()])?;

    println!("{}: {} (n = {}, form {})", r.name, r.verdict.as_str(), r.n, r.form);
    println!("  lhs     = {}", r.lhs);
    println!("  rhs     = {}", r.rhs);
    println!("  deficit = {}", r.deficit);
    if let Some(b) = r.error_bound {
        println!("  error bound = {b:e}");
    }
    for note in &r.notes {
        println!("  note: {note}");
    }
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(if r.verdict == Verdict::Violated { EXIT_VIOLATED } else { EXIT_OK })
}

fn parse_dims(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--dim expects `n` or `a..b`, got `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?)),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

#[derive(Serialize)]
struct SuiteRow<'a> {
    trial: usize,
    check: &'a str,
    n: usize,
    verdict: &'a str,
    deficit_float: Option<f64>,
    deficit_exact: String,
    error: &'a str,
}

impl<'a> SuiteRow<'a> {
    fn new(r: &'a TrialRecord) -> Self {
        SuiteRow {
            trial: r.trial,
            check: r.check.as_str(),
            n: r.n,
            verdict: r.verdict.map(Verdict::as_str).unwrap_or("error"),
            deficit_float: r.deficit.as_ref().map(|d| d.to_f64()),
            deficit_exact: r.deficit.as_ref().filter(|d| d.is_exact()).map(|d| d.to_string()).unwrap_or_default(),
            error: r.error.as_deref().unwrap_or(""),
        }
    }
}

pub fn random_suite(
    common: &Common,
    trials: usize,
    dim: &str,
    max_generators: usize,
    bound: i64,
    checks: Option<Vec<CheckName>>,
) -> Result<u8, CliError> {
    let (min_dim, max_dim) = parse_dims(dim)?;
    let defaults = SuiteConfig::default();
    let config = SuiteConfig {
        seed: common.seed,
        trials,
        min_dim,
        max_dim,
        max_generators,
        bound,
        backend: common.backend.unwrap_or(defaults.backend),
        tolerance: common.tolerance,
        checks: checks.unwrap_or(defaults.checks.clone()),
        ..defaults
    };
    let report = run_suite(&config)?;

    let json = out_file(&common.out, "suite.json")?;
    let csv = out_file(&common.out, "suite.csv")?;
    write_json(&json, &report)?;
    let rows: Vec<SuiteRow> = report.records.iter().map(SuiteRow::new).collect();
    write_csv(&csv, &SUITE_COLUMNS, &rows)?;
    for w in &report.witnesses {
        let p = out_file(&common.out, &format!("witness-{}-{}.json", w.trial, w.check))?;
        write_json(&p, &w.instance)?;
        println!("violation in trial {} ({}): minimized witness at {}", w.trial, w.check, p.display());
    }

    println!("trials: {}  seed: {}  dims: {}..={}", config.trials, config.seed, config.min_dim, config.max_dim);
    println!("violations: {}", report.violations);
    println!("{:<12} {:>6} {:>6} {:>8} {:>8} {:>6}  min deficit", "check", "runs", "holds", "equality", "violated", "errors");
    for (c, s) in &report.summary {
        let min = s.min_deficit.as_ref().map(|d| format!("{:.6e}", d.to_f64())).unwrap_or_else(|| "-".into());
        println!(
            "{:<12} {:>6} {:>6} {:>8} {:>8} {:>6}  {min}",
            c.as_str(),
            s.runs,
            s.holds,
            s.equality,
            s.violated,
            s.errors
        );
    }
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(if report.violations > 0 { EXIT_VIOLATED } else { EXIT_OK })
}

pub fn certify(path: &Path, out: &Path) -> Result<u8, CliError> {
    let file = read_bodies(path)?;
    let outcome = certify_equality(file.k_zonotope()?, file.l()?)?;
    let p = out_file(out, "certificate.json")?;
    write_json(&p, &outcome)?;
    match &outcome {
        EqualityOutcome::Certified(c) => {
            println!("certified: {} components", c.components.len());
            for ((comp, d), a) in c.components.iter().zip(&c.dims).zip(&c.scales) {
                println!("  generators {comp:?}  dim {d}  scale {a}");
            }
        }
        EqualityOutcome::Refuted(r) => {
            println!("refuted: {}", r.refutation);
            if !r.witness_atoms.is_empty() {
                println!("  witness atoms: {}", serde_json::to_string(&r.witness_atoms).unwrap_or_default());
            }
        }
    }
    println!("wrote {}", p.display());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    parity: &'static str,
    eigenvalue: f64,
}

pub fn spectrum(path: &Path, grid: Option<usize>, out: &Path) -> Result<u8, CliError> {
    let file = read_bodies(path)?;
    let n = grid.or(file.task.grid).unwrap_or(2048);
    let s = circle_spectrum(file.k_smooth()?, n)?;
    let rows: Vec<SpectrumRow> = s
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(index, e)| SpectrumRow { index, parity: e.parity.as_str(), eigenvalue: e.value })
        .collect();
    let p = out_file(out, "spectrum.csv")?;
    write_csv(&p, &SPECTRUM_COLUMNS, &rows)?;
    for r in rows.iter().take(8) {
        println!("{:>4} {:<4} {:.9}", r.index, r.parity, r.eigenvalue);
    }
    if let Some(v) = s.second_even() {
        println!("second even eigenvalue: {v:.9}");
    }
    println!("wrote {} ({} eigenvalues)", p.display(), rows.len());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BochnerRow {
    level: u32,
    nodes: usize,
    side1: f64,
    side2: f64,
    residual: f64,
    min_integrand: f64,
}

pub fn bochner(path: &Path, levels: &[u32], out: &Path) -> Result<u8, CliError> {
    let file = read_bodies(path)?;
    let k = file.k_smooth()?;
    let finest = *levels.iter().max().ok_or_else(|| CliError::Usage("--levels is empty".into()))?;
    let (a, f) = sphere_difference(&file, &SphereQuadrature::icosahedral(finest))?;
    let table = bochner_convergence(k, &f, levels)?;
    let rows: Vec<BochnerRow> = table
        .iter()
        .map(|r| BochnerRow {
            level: r.level,
            nodes: 20 * 4usize.pow(r.level),
            side1: r.side1,
            side2: r.side2,
            residual: r.residual,
            min_integrand: r.min_integrand,
        })
        .collect();
    let p = out_file(out, "bochner.csv")?;
    write_csv(&p, &BOCHNER_COLUMNS, &rows)?;
    println!("f = h_L - a h_K with a = {a:.12}");
    for r in &rows {
        println!("level {:>2} nodes {:>7}  side1 {:.12e}  side2 {:.12e}  residual {:.3e}", r.level, r.nodes, r.side1, r.side2, r.residual);
    }
    println!("wrote {}", p.display());
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MeasureKind {
    /// `S_K`
    Surface,
    /// `V_K`
    Cone,
    /// `S_{L,K,…,K}`
    Mixed,
    /// planar generating measure of K
    Generating,
}

pub fn measure(path: &Path, kind: MeasureKind) -> Result<u8, CliError> {
    let file = read_bodies(path)?;
    let m = match kind {
        MeasureKind::Surface => surface_area_measure(file.k_zonotope()?)?,
        MeasureKind::Cone => cone_volume_measure(file.k_zonotope()?)?,
        MeasureKind::Mixed => {
            let k = file.k_zonotope()?;
            if k.dim() < 2 {
                return Err(Error::Precondition("mixed area measures need n >= 2".into()).into());
            }
            let mut slots = vec![Slot::try_from(file.l()?)?];
            slots.extend(std::iter::repeat_n(Slot::Zonotope(k.clone()), k.dim() - 2));
            mixed_area_measure(&slots)?
        }
        MeasureKind::Generating => planar_generating_measure(file.k()?, file.task.grid.unwrap_or(2048))?.eta,
    };
    let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Other(e.to_string()))?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
        _ => Ok(EXIT_OK),
    }
}
