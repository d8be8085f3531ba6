use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use weaktrace_core::netgraph::{parse_network, ElementKind, NestedMzi, NetworkError, ParseErrorKind};
use weaktrace_core::{build_nested_mzi, enumerate_paths, C64};

const SHIPPED: &str = include_str!("../data/nested_mzi.imz");

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn minimal_document() {
    let net = parse_network("source s0\nsplitter B s0 -> a b t=0.7071\ndetector d=a\ndump b\n").unwrap();
    let splitters = net.elements().iter().filter(|e| matches!(e.kind, ElementKind::Splitter { .. })).count();
    assert_eq!(splitters, 1);
    assert_eq!(net.label(net.detector()), "a");
}

#[test]
fn out_of_range_splitter() {
    let err = parse_network("source s0\nsplitter B s0 -> a b t=1.2\ndetector a\ndump b\n").unwrap_err();
    assert!(err.to_string().contains("splitter magnitude out of range"), "{err}");
    assert_eq!(err.line, 2);
}

#[test]
fn multiple_detectors_rejected() {
    let err = parse_network("source s0\nsplitter B s0 -> a b t=0.5\ndetector a\ndetector b\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::MultipleDetectors(_))));
    assert_eq!(err.line, 4);
}

#[test]
fn dangling_segment_names_location() {
    let err = parse_network("source s0\nsplitter B s0 -> a b t=0.5\ndetector a\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Network(NetworkError::DanglingSegment(ref s)) if s == "b"));
    assert_eq!((err.line, err.column), (2, 20));
}

#[test]
fn shipped_document_matches_builder() {
    let parsed = parse_network(SHIPPED).unwrap();
    let built = build_nested_mzi(0.0, &BTreeMap::new());
    assert!(parsed.is_isomorphic(&built));
    assert!(built.is_isomorphic(&parsed));
    assert!(!parsed.is_isomorphic(&build_nested_mzi(0.3, &BTreeMap::new())));
}

#[test]
fn nested_paths() {
    let net = NestedMzi::new(0.0).build();
    let paths = enumerate_paths(&net);
    let mut routes: Vec<Vec<&str>> = paths.paths.iter().map(|p| p.mirror_tags().collect()).collect();
    routes.sort();
    assert_eq!(routes, vec![vec!["C"], vec!["E", "A", "F"], vec!["E", "B", "F"]]);
    let total = net.transfer_amplitude("s0", "det").unwrap();
    assert!(close(paths.total(), total, 1e-12));
}

#[test]
fn nested_transfer_amplitudes() {
    let zero = NestedMzi::new(0.0).build();
    let t0 = zero.transfer_amplitude("s0", "det").unwrap();
    assert!((t0.norm() - 1.0 / 3.0).abs() < 1e-12);
    let pf = NestedMzi::new(FRAC_PI_2).build();
    let t = pf.transfer_amplitude("s0", "det").unwrap();
    assert!(close(t, C64::new(0.0, 1.0 / 3.0), 1e-12), "{t}");
    assert_eq!(zero.transfer_amplitude("A", "A").unwrap(), C64::new(1.0, 0.0));
    assert!(zero.transfer_amplitude("s0", "nowhere").is_err());
}

#[test]
fn nested_cut_amplitudes() {
    let s3 = 3f64.sqrt();
    for phi in [0.0, FRAC_PI_2, 1.234] {
        let net = NestedMzi::new(phi).build();
        let fwd = net.amplitudes_from(net.source());
        let bwd = net.amplitudes_to(net.detector());
        let id = |s: &str| net.segment_id(s).unwrap();
        let expect_f = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::from_polar(1.0, phi)];
        let expect_b = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)];
        for (k, seg) in ["A", "B", "C"].iter().enumerate() {
            assert!(close(fwd[id(seg)] * s3, expect_f[k], 1e-12), "phi={phi} fwd {seg}");
            assert!(close(bwd[id(seg)] * s3, expect_b[k], 1e-12), "phi={phi} bwd {seg}");
        }
        assert!(fwd[id("F")].norm() < 1e-15);
        assert!(bwd[id("E")].norm() < 1e-15);
    }
}

#[test]
fn power_is_conserved_in_nested() {
    let net = NestedMzi::new(0.77).with_imbalance(0.3).build();
    let amps = net.amplitudes_from(net.source());
    let total: f64 = net.terminals().map(|s| amps[s].norm_sqr()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn dsl_round_trip_of_nested() {
    let mut z = BTreeMap::new();
    z.insert("A".to_string(), 120.5);
    z.insert("F".to_string(), -3.0);
    let net = NestedMzi::new(0.4).with_imbalance(0.1).with_offsets(z).build();
    let again = parse_network(&net.to_dsl()).unwrap();
    assert!(net.is_isomorphic(&again));
}
