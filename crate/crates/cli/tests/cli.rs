use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logbm_core::io::parse_measure;
use logbm_core::suite::{CheckOutcome, SuiteReport};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn logbm(args: &[&str], out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logbm"));
    cmd.args(args).current_dir(out).env_remove("LOGBM_THREADS");
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn check_cube_cross_reports_strict_local_logbm() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("cube_cross.json");
    let o = logbm(&["check", "local-logbm", f.to_str().unwrap(), "--out", "r"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&dir.path().join("r/local-logbm.json"));
    assert_eq!(v["report"]["lhs"], "8");
    assert_eq!(v["report"]["rhs"], "16/3");
    assert_eq!(v["report"]["deficit"], "8/3");
    assert_eq!(v["report"]["verdict"], "holds");
    let csv = fs::read_to_string(dir.path().join("r/local-logbm.csv")).unwrap();
    assert_eq!(csv, "name,n,verdict,deficit_float,deficit_exact\nlocal-logbm,3,holds,2.6666666666666665,8/3\n");
}

#[test]
fn check_cube_box_is_equality() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("cube_box123.json");
    let o = logbm(&["check", "local-logbm", f.to_str().unwrap(), "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let v = read_json(&dir.path().join("local-logbm.json"));
    assert_eq!(v["report"]["verdict"], "equality");
    assert_eq!(v["report"]["deficit"], "0");
    assert_eq!(v["report"]["lhs"], "32");
}

#[test]
fn every_polytopal_check_runs_on_cube_cross() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("cube_cross.json");
    for name in ["bm", "mink1", "mink2", "logmink", "indstep", "alexandrov-eq", "geomean"] {
        let o = logbm(&["check", name, f.to_str().unwrap(), "--out", "."], dir.path());
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(format!("{name}.json")).exists());
        assert!(dir.path().join(format!("{name}.csv")).exists());
    }
}

#[test]
fn float_backend_flag_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("cube_cross.json");
    let o = logbm(&["check", "mink2", f.to_str().unwrap(), "--backend", "float", "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let v = read_json(&dir.path().join("mink2.json"));
    assert_eq!(v["report"]["exact"], false);
    assert!(v["report"]["lhs"].is_number());
}

#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, file) in [("local-logbm", "cube_cross.json"), ("alexandrov-eq", "cube_box123.json"), ("superlich", "ellipses.json")] {
        let f = data(file);
        let o = logbm(&["check", name, f.to_str().unwrap(), "--out", "."], dir.path());
        assert_eq!(code(&o), 0);
        let text = fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        let parsed: CheckOutcome = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    }
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = data("malformed.json");
    assert_eq!(code(&logbm(&["check", "local-logbm", bad.to_str().unwrap()], dir.path())), 4);
    let cc = data("cube_cross.json");
    assert_eq!(code(&logbm(&["check", "nope", cc.to_str().unwrap()], dir.path())), 3);
    assert_eq!(code(&logbm(&["check", "superlich", cc.to_str().unwrap()], dir.path())), 3);
    assert_eq!(code(&logbm(&["check", "mink1", "missing.json"], dir.path())), 1);
    let bad_dim = dir.path().join("bad_dim.json");
    fs::write(
        &bad_dim,
        r#"{"dim": 2, "bodies": {"K": {"type": "zonotope", "generators": [{"u": ["1","0","0"]}]}}, "task": {"K": "K"}}"#,
    )
    .unwrap();
    assert_eq!(code(&logbm(&["check", "mink1", bad_dim.to_str().unwrap()], dir.path())), 4);
}

#[test]
fn random_suite_seed_42_is_clean_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["random-suite", "--seed", "42", "--trials", "100", "--dim", "3"];
    let a = logbm(&[&args[..], &["--out", "a"]].concat(), dir.path());
    assert_eq!(code(&a), 0);
    assert!(stdout(&a).contains("violations: 0"));
    assert!(stdout(&a).contains("local-logbm"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logbm"));
    let b = cmd
        .args([&args[..], &["--out", "b"]].concat())
        .current_dir(dir.path())
        .env("LOGBM_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&b), 0);
    for f in ["suite.json", "suite.csv"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap());
    }
    let report: SuiteReport = serde_json::from_str(&fs::read_to_string(dir.path().join("a/suite.json")).unwrap()).unwrap();
    assert_eq!(report.violations, 0);
    assert_eq!(report.records.len(), 500);
}

#[test]
fn random_suite_with_zero_trials_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let o = logbm(&["random-suite", "--trials", "0", "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations: 0"));
    let csv = fs::read_to_string(dir.path().join("suite.csv")).unwrap();
    assert_eq!(csv, "trial,check,n,verdict,deficit_float,deficit_exact,error\n");
}

#[test]
fn random_suite_rejects_bad_dimension() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&logbm(&["random-suite", "--dim", "7", "--trials", "1"], dir.path())), 3);
    assert_eq!(code(&logbm(&["random-suite", "--dim", "x", "--trials", "1"], dir.path())), 1);
}

#[test]
fn certify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let o = logbm(&["certify", data("cube_box123.json").to_str().unwrap(), "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let v = read_json(&dir.path().join("certificate.json"));
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
    assert_eq!(v["scales"], serde_json::json!(["1", "2", "3"]));

    let o = logbm(&["certify", data("cube_cross.json").to_str().unwrap(), "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let v = read_json(&dir.path().join("certificate.json"));
    assert_eq!(v["refutation"], "inequality strict");

    let same = dir.path().join("same.json");
    let text = fs::read_to_string(data("cube_box123.json")).unwrap().replace(r#""L": "L""#, r#""L": "K""#);
    fs::write(&same, text).unwrap();
    let o = logbm(&["certify", same.to_str().unwrap(), "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let v = read_json(&dir.path().join("certificate.json"));
    assert_eq!(v["scales"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn spectrum_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = logbm(&["spectrum", data("ellipses.json").to_str().unwrap(), "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,parity,eigenvalue"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[..2], ["0", "even"]);
    assert!((first[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn bochner_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = logbm(&["bochner", data("ellipsoids.json").to_str().unwrap(), "--levels", "2,3", "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("bochner.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "level,nodes,side1,side2,residual,min_integrand");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,320,"));
}

#[test]
fn measure_dump_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["surface", "cone", "mixed"] {
        let o = logbm(&["measure", data("cube_cross.json").to_str().unwrap(), "--kind", kind], dir.path());
        assert_eq!(code(&o), 0);
        let m = parse_measure(&stdout(&o)).unwrap();
        assert_eq!(m.dim(), 3);
    }
}
