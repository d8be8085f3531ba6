use std::f64::consts::{FRAC_PI_2, PI};

use weaktrace_core::netgraph::{random_network, Network, NESTED_MIRRORS};
use weaktrace_core::tsvf::{
    all_weak_values, backward_amplitudes, enumerate_cuts, forward_amplitudes, validate_cut, TsvfError,
};
use weaktrace_core::{weak_values, Cut, NestedMzi, TwoStateVector, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn assert_values(phi: f64, expected: [C64; 5]) {
    let rep = weak_values(&NestedMzi::new(phi).build(), &NESTED_MIRRORS).unwrap();
    for (tag, want) in NESTED_MIRRORS.iter().zip(expected) {
        let got = rep.get(tag).unwrap();
        assert!((got - want).norm() < 1e-12, "phi={phi} {tag}: {got} vs {want}");
    }
}

#[test]
fn original_configuration() {
    assert_values(0.0, [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
}

#[test]
fn pf_configuration() {
    assert_values(FRAC_PI_2, [c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let rep = weak_values(&NestedMzi::new(FRAC_PI_2).build(), &NESTED_MIRRORS).unwrap();
    assert!((rep.overlap - c(0.0, 1.0 / 3.0)).norm() < 1e-12);
}

#[test]
fn general_phase() {
    for phi in [0.3, 1.7, -2.2, PI] {
        let e = C64::from_polar(1.0, -phi);
        assert_values(phi, [e, -e, c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }
}

#[test]
fn cut_examples() {
    let net = NestedMzi::new(0.0).build();
    for segs in [&["A", "B", "C"][..], &["E", "C"], &["F", "C"]] {
        let check = validate_cut(&net, &Cut::new(segs));
        assert!(check.valid, "{segs:?}: {:?}", check.diagnostic);
    }
    let bad = validate_cut(&net, &Cut::new(&["A", "C"]));
    assert!(!bad.valid);
    let diag = bad.diagnostic.unwrap();
    assert!(diag.contains("E -> BS") || diag.contains("B"), "{diag}");
}

#[test]
fn forward_and_backward_examples() {
    let net = NestedMzi::new(0.9).build();
    let fwd = forward_amplitudes(&net, &Cut::new(&["F", "C"])).unwrap();
    assert!(fwd["F"].norm() < 1e-15);
    let bwd = backward_amplitudes(&net, &Cut::new(&["E", "C"])).unwrap();
    assert!(bwd["E"].norm() < 1e-15);
    let det = backward_amplitudes(&net, &Cut::new(&["det"])).unwrap();
    assert_eq!(det["det"], c(1.0, 0.0));
    assert!(matches!(forward_amplitudes(&net, &Cut::new(&["A", "C"])), Err(TsvfError::InvalidCut { .. })));
}

#[test]
fn cut_sums_and_overlap_consistency_nested() {
    for phi in [0.0, 0.5, FRAC_PI_2, 2.5] {
        let net = NestedMzi::new(phi).build();
        let overlap = net.transfer_amplitude("s0", "det").unwrap();
        for segs in [&["A", "B", "C"][..], &["E", "C"], &["F", "C"]] {
            let tsv = TwoStateVector::new(&net, &Cut::new(segs)).unwrap();
            assert!((tsv.cut_overlap() - overlap).norm() < 1e-12);
            let sum: C64 = tsv.weak_values().unwrap().values().sum();
            assert!((sum - 1.0).norm() < 1e-10, "phi={phi} {segs:?}");
        }
    }
}

#[test]
fn vanishing_rule() {
    let net = NestedMzi::new(0.0).build();
    let rep = all_weak_values(&net).unwrap();
    let fwd = net.amplitudes_from(net.source());
    let bwd = net.amplitudes_to(net.detector());
    for (tag, _, _, seg) in net.mirrors() {
        let zero_weak = rep.values[tag].norm() < 1e-15;
        let zero_amp = fwd[seg].norm() < 1e-15 || bwd[seg].norm() < 1e-15;
        assert_eq!(zero_weak, zero_amp, "{tag}");
    }
    assert!(fwd[net.segment_id("F").unwrap()].norm() < 1e-15);
    assert!(bwd[net.segment_id("E").unwrap()].norm() < 1e-15);
}

#[test]
fn global_phase_invariance() {
    let base = NestedMzi::new(0.8).build();
    // equal plates on both outputs of the first splitter rotate every forward amplitude
    let rotated = {
        let dsl = format!("{}phase g1 e phi=1.1\nphase g2 c phi=1.1\n", base.to_dsl());
        weaktrace_core::parse_network(&dsl).unwrap()
    };
    let a = weak_values(&base, &NESTED_MIRRORS).unwrap();
    let b = weak_values(&rotated, &NESTED_MIRRORS).unwrap();
    for tag in NESTED_MIRRORS {
        assert!((a.values[tag] - b.values[tag]).norm() < 1e-12);
    }
    assert!((b.overlap - a.overlap * C64::from_polar(1.0, 1.1)).norm() < 1e-12);
}

#[test]
fn dark_detector_is_an_error() {
    let net = Network::builder()
        .source("s0")
        .splitter("B1", &["s0"], "a", "b", 0.5f64.sqrt())
        .mirror("M1", "a", "a2", 0.0)
        .mirror("M2", "b", "b2", 0.0)
        .splitter("B2", &["a2", "b2"], "d", "x", 0.5f64.sqrt())
        .detector("d")
        .dump("x")
        .build()
        .unwrap();
    assert!(matches!(weak_values(&net, &["M1"]), Err(TsvfError::ZeroOverlap { .. })));
}

#[test]
fn unknown_mirror() {
    let net = NestedMzi::new(0.0).build();
    assert_eq!(weak_values(&net, &["Q"]).unwrap_err(), TsvfError::UnknownMirror("Q".into()));
}

fn xorshift(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed;
    move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[test]
fn random_networks_cut_sum_rule() {
    let mut uniform = xorshift(0x9E3779B97F4A7C15);
    let mut checked = 0;
    while checked < 100 {
        let net = random_network(&mut uniform, 8);
        let overlap = net.transfer_between(net.source(), net.detector());
        if overlap.norm() < 1e-9 {
            continue;
        }
        for cut in enumerate_cuts(&net, 10_000) {
            let tsv = TwoStateVector::new(&net, &cut).unwrap();
            assert!((tsv.cut_overlap() - overlap).norm() < 1e-12);
            let sum: C64 = tsv.weak_values().unwrap().values().sum();
            assert!((sum - 1.0).norm() < 1e-10, "{}: {sum}", cut.name);
        }
        checked += 1;
    }
}
