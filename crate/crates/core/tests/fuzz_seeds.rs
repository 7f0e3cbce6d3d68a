//! Replays the fuzz corpus seeds, plus deterministic truncations and byte
//! flips of each, through every parser. Nothing may panic.

use std::fs;
use std::path::Path;

use logbm_core::io::{parse_certificate, parse_measure, parse_scalar, BodiesFile};

fn parse(target: &str, data: &[u8]) {
    match target {
        "bodies_file" => drop(BodiesFile::parse_bytes(data)),
        other => {
            let Ok(text) = std::str::from_utf8(data) else { return };
            match other {
                "scalar" => drop(parse_scalar(text)),
                "measure" => drop(parse_measure(text)),
                "certificate" => drop(parse_certificate(text)),
                _ => unreachable!(),
            }
        }
    }
}

fn variants(seed: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![seed.to_vec()];
    let step = (seed.len() / 16).max(1);
    for cut in (0..seed.len()).step_by(step) {
        out.push(seed[..cut].to_vec());
        for b in [b'-', b'0', b'/', b'"', b'9', 0xff] {
            let mut v = seed.to_vec();
            v[cut] = b;
            out.push(v);
        }
    }
    out
}

#[test]
fn corpus_seeds_and_mutations_do_not_panic() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for target in ["bodies_file", "scalar", "measure", "certificate"] {
        let dir = root.join(target);
        let mut seeds = 0;
        for entry in fs::read_dir(&dir).unwrap() {
            let data = fs::read(entry.unwrap().path()).unwrap();
            for v in variants(&data) {
                parse(target, &v);
                seen += 1;
            }
            seeds += 1;
        }
        assert!(seeds > 0, "no seeds for {target}");
    }
    assert!(seen > 100);
}

#[test]
fn well_formed_seeds_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read = |p: &str| fs::read_to_string(root.join(p)).unwrap();
    assert!(BodiesFile::parse(&read("bodies_file/seed-cube_cross")).is_ok());
    assert!(BodiesFile::parse(&read("bodies_file/seed-malformed")).is_err());
    assert!(parse_measure(&read("measure/seed-surface")).is_ok());
    assert!(parse_certificate(&read("certificate/seed-box")).is_ok());
    assert_eq!(parse_scalar("8/3").unwrap().to_string(), "8/3");
}
