use std::fs;
use std::path::PathBuf;

use wheelpath::certify::{emit, load, verify_certificate, verify_document};
use wheelpath::construct::build_structure;
use wheelpath::pairing::pair_structure;
use wheelpath::{CayleyGraph, CertError, Certificate, ConstructOptions, Family, Permutation};

const GOLDEN: [&str; 3] = ["cw4.json", "cw5.json", "cw5_three_copies.json"];

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(p).unwrap()
}

fn rebuild(cert: &Certificate) -> Certificate {
    let g = CayleyGraph::build(cert.n, Family::Wheel).unwrap();
    let trace = cert.case_trace.as_ref().unwrap();
    // Input order is recovered from the recorded relabelling.
    let mut omega = [0usize; 3];
    for (role, &input) in trace.relabel.iter().enumerate() {
        let p: Permutation = cert.omega[role].parse().unwrap();
        omega[input] = g.vertex(&p).unwrap();
    }
    let options = ConstructOptions {
        strict: true,
        ..Default::default()
    };
    let built = build_structure(&g, omega, options).unwrap();
    let paths = pair_structure(&g.full_view(), &built.structure).unwrap();
    Certificate::for_structure(&g, &built, &paths, cert.solver_metadata.seed)
}

#[test]
fn golden_files_verify() {
    for name in GOLDEN {
        let report = verify_document(&golden(name)).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.violations);
    }
}

#[test]
fn golden_round_trip() {
    for name in GOLDEN {
        let doc = golden(name);
        assert_eq!(emit(&load(&doc).unwrap()), doc, "{name}");
    }
}

#[test]
fn golden_regenerates_byte_identical() {
    for name in GOLDEN {
        let doc = golden(name);
        let cert = load(&doc).unwrap();
        assert_eq!(emit(&rebuild(&cert)), doc, "{name}");
    }
}

#[test]
fn corrupted_golden_fails() {
    let mut cert = load(&golden("cw5.json")).unwrap();
    let p = &mut cert.omega_paths[1];
    let mid = p.len() / 2;
    p.swap(mid - 1, mid);
    let report = verify_certificate(&cert);
    assert!(!report.passed());
    assert!(report.violations.iter().any(|v| v.contains("omega path 1")));
}

#[test]
fn wrong_target_parity_fails() {
    // Odd-degree bundle sizes presented as a degree-4 certificate.
    let mut cert = load(&golden("cw4.json")).unwrap();
    let five = load(&golden("cw5.json")).unwrap();
    cert.bundles.ac.extend(five.bundles.ac.iter().take(2).cloned());
    let report = verify_certificate(&cert);
    assert!(report.violations.iter().any(|v| v.contains("bundle counts") && v.contains("[2, 2, 2]")));
}

#[test]
fn schema_negative_controls() {
    let doc = golden("cw4.json");
    let cut = &doc[..doc.find("\"bundles\"").unwrap()];
    let truncated = format!("{}\"omega_paths\": []}}", cut);
    match load(&truncated) {
        Err(CertError::Schema(m)) => assert!(m.contains("bundles"), "{m}"),
        other => panic!("expected schema error, got {other:?}"),
    }
    let bumped = doc.replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
    assert!(matches!(load(&bumped), Err(CertError::VersionMismatch { found: 7, .. })));
}
