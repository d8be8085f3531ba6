use proptest::prelude::*;
use rustfft::FftPlanner;

use weaktrace::oracle::{engine_distance, grid_propagate, oracle_spec, Step};
use weaktrace_core::beam::evaluate_on_grid;
use weaktrace_core::{power_spectrum, BeamParams, GaussianBeam, QuadCellReading, VibrationConfig, C64};

fn step() -> impl Strategy<Value = Step> {
    let eps_max = 0.05;
    let theta = BeamParams::default().theta_for_eps(eps_max);
    prop_oneof![(-theta..theta).prop_map(Step::Tilt), (-1500.0f64..1500.0).prop_map(Step::Propagate)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engines_agree(z0 in -800.0f64..800.0, steps in prop::collection::vec(step(), 1..=6)) {
        let start = GaussianBeam::waist(&BeamParams::default()).propagate(z0);
        let d = engine_distance(&start, &steps).unwrap();
        prop_assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn propagation_is_unitary(dz in -3000.0f64..3000.0) {
        let beam = GaussianBeam::waist(&BeamParams::default()).apply_tilt(1e-5);
        let spec = oracle_spec(beam.propagate(dz).width(), 0.05);
        let f = evaluate_on_grid(&beam, &spec).unwrap();
        let g = grid_propagate(&f, dz).unwrap();
        prop_assert!((g.power() - f.power()).abs() < 1e-12);
    }
}

#[test]
fn direct_dft_matches_fft() {
    let vib = VibrationConfig::default_for(1e-3, &BeamParams::default());
    let n = vib.n_samples();
    let signal: Vec<f64> = (0..n).map(|i| ((i * 7919) % 113) as f64 / 113.0 - 0.5).collect();
    let readings: Vec<QuadCellReading> = signal.iter().map(|&s| QuadCellReading::new(s, 1.0)).collect();
    let rep = power_spectrum(&readings, &vib).unwrap();
    let mut buf: Vec<C64> = signal.iter().map(|&s| C64::new(s, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    for (bin, fft) in rep.bins.iter().zip(&buf) {
        assert!((bin.value - fft / n as f64).norm() < 1e-14, "bin {}", bin.index);
    }
}

#[test]
fn centroid_after_kick_at_waist() {
    let p = BeamParams::default();
    let theta = 3e-5;
    let z = 2.0 * p.rayleigh_range();
    let beam = GaussianBeam::waist(&p).apply_tilt(theta).propagate(z);
    assert!((beam.x_c - 2.0 * theta * z).abs() < 1e-12);
    let spec = oracle_spec(beam.width(), beam.x_c.abs());
    let start = evaluate_on_grid(&GaussianBeam::waist(&p).apply_tilt(theta), &spec).unwrap();
    let moved = grid_propagate(&start, z).unwrap();
    let power = moved.power();
    let mean: f64 = moved.samples.iter().enumerate().map(|(i, s)| moved.x(i) * s.norm_sqr()).sum::<f64>() * moved.dx / power;
    assert!((mean - 2.0 * theta * z).abs() < 1e-9, "{mean}");
}
