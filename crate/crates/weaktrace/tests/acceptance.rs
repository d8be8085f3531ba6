//! Acceptance criteria 1-10, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) so the lines always reach the test log; exits non-zero
//! if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use weaktrace::config::Config;
use weaktrace::manifest::RunArtifacts;
use weaktrace::oracle::{engine_distance, Step};
use weaktrace::scenarios::{run_danan_original, run_pf_modification, run_scaling, run_zd_sweep, NULL_THRESHOLD};
use weaktrace_core::netgraph::{random_network, NESTED_MIRRORS};
use weaktrace_core::tsvf::enumerate_cuts;
use weaktrace_core::{
    analytic_first_order, power_spectrum, simulate_timeseries, weak_values, BeamParams, GaussianBeam, NestedMzi,
    TwoStateVector, VibrationConfig, C64,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("weak values, original configuration", c1, Duration::from_millis(1)),
        ("weak values, PF configuration", c2, Duration::from_millis(1)),
        ("cut-sum rule on 100 random networks", c3, Duration::MAX),
        ("engine equivalence, 50 random sequences", c4, Duration::from_secs(30)),
        ("original-experiment spectrum", c5, Duration::from_secs(60)),
        ("PF nulling with persistent trace", c6, Duration::MAX),
        ("detector-distance sweep", c7, Duration::from_secs(300)),
        ("scaling study", c8, Duration::from_secs(300)),
        ("predictor convergence", c9, Duration::MAX),
        ("determinism", c10, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        // criteria 1 and 2 time the computation itself inside the check
        let over = i >= 2 && took > *budget;
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; took {took:.2?}, budget {budget:?}")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:2} {status}: {name} ({detail}) [{took:.2?}]", i + 1);
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Fastest of several timed runs of network construction plus weak values.
fn timed_weak_values(phi: f64) -> (weaktrace_core::WeakValueReport, Duration) {
    let mut best = Duration::MAX;
    let mut rep = None;
    for _ in 0..25 {
        let t = Instant::now();
        let r = weak_values(&NestedMzi::new(phi).build(), &NESTED_MIRRORS).unwrap();
        best = best.min(t.elapsed());
        rep = Some(r);
    }
    (rep.unwrap(), best)
}

fn check_values(phi: f64, expected: [C64; 5]) -> Outcome {
    let (rep, took) = timed_weak_values(phi);
    let worst = NESTED_MIRRORS.iter().zip(expected).map(|(t, e)| (rep.values[*t] - e).norm()).fold(0.0, f64::max);
    ensure(worst < 1e-12 && took < Duration::from_millis(1), format!("max deviation {worst:.1e}, runtime {took:.2?}"))
}

fn c1() -> Outcome {
    let c = |re| C64::new(re, 0.0);
    check_values(0.0, [c(1.0), c(-1.0), c(1.0), c(0.0), c(0.0)])
}

fn c2() -> Outcome {
    let i = C64::new(0.0, 1.0);
    let detail = check_values(FRAC_PI_2, [-i, i, C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])?;
    let overlap = timed_weak_values(FRAC_PI_2).0.overlap;
    let dev = (overlap - i / 3.0).norm();
    ensure(dev < 1e-12, format!("{detail}, overlap {overlap:.6} (deviation {dev:.1e})"))
}

fn c3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let (mut nets, mut cuts, mut worst) = (0, 0, 0.0f64);
    while nets < 100 {
        let net = random_network(&mut || rng.gen::<f64>(), 8);
        if net.transfer_between(net.source(), net.detector()).norm() < 1e-9 {
            continue;
        }
        nets += 1;
        for cut in enumerate_cuts(&net, 10_000) {
            let sum: C64 = TwoStateVector::new(&net, &cut).unwrap().weak_values().unwrap().values().sum();
            worst = worst.max((sum - 1.0).norm());
            cuts += 1;
        }
    }
    ensure(worst < 1e-10, format!("{nets} networks, {cuts} cuts, max |sum - 1| {worst:.1e}"))
}

fn c4() -> Outcome {
    let p = BeamParams::default();
    let theta_max = p.theta_for_eps(0.05);
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let start = GaussianBeam::waist(&p).propagate(rng.gen_range(-800.0..800.0));
        let steps: Vec<Step> = (0..rng.gen_range(1..=6))
            .map(|_| if rng.gen_bool(0.5) { Step::Tilt(rng.gen_range(-theta_max..theta_max)) } else { Step::Propagate(rng.gen_range(-1500.0..1500.0)) })
            .collect();
        worst = worst.max(engine_distance(&start, &steps).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-8, format!("max relative L2 {worst:.2e}"))
}

fn c5() -> Outcome {
    let run = run_danan_original(&Config::default()).map_err(|e| e.to_string())?;
    let s = &run.spectrum;
    let c = s.peak_magnitude("C");
    let (a, b) = (s.peak_magnitude("A") / c, s.peak_magnitude("B") / c);
    let (e, f) = (s.peak_magnitude("E") / c, s.peak_magnitude("F") / c);
    ensure(
        (a - 1.0).abs() < 0.01 && (b - 1.0).abs() < 0.01 && e < NULL_THRESHOLD && f < NULL_THRESHOLD,
        format!("A/C {a:.5}, B/C {b:.5}, E/C {e:.1e}, F/C {f:.1e}"),
    )
}

fn c6() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for z in ["far", "1000", "3000"] {
        let cfg = Config::parse(&format!("z_d = {z}"), "acceptance").unwrap();
        let run = run_pf_modification(&cfg).map_err(|e| e.to_string())?;
        let c = run.spectrum.peak_magnitude("C");
        let worst = ["A", "B"].iter().map(|t| run.spectrum.peak_magnitude(t) / c).fold(0.0, f64::max);
        let ratio = run.traces.strength("A") / run.original_traces.strength("A");
        ok &= worst < NULL_THRESHOLD && (ratio - 1.0).abs() < 0.01;
        details.push(format!("z_d={z}: A,B/C {worst:.1e}, trace A ratio {ratio:.5}"));
    }
    ensure(ok, details.join("; "))
}

fn c7() -> Outcome {
    let run = run_zd_sweep(&Config::default()).map_err(|e| e.to_string())?;
    let worst_e = run.points.iter().map(|p| p.magnitude["E"].max(p.magnitude["F"]) / p.magnitude["C"]).fold(0.0, f64::max);
    ensure(
        run.points.len() == 12 && run.phi_c == FRAC_PI_2 && run.relative_rms < 0.02 && worst_e < NULL_THRESHOLD,
        format!("{} points, relative RMS {:.2e} at scale {:.5}, worst E,F/C {worst_e:.1e}", run.points.len(), run.relative_rms, run.scale),
    )
}

fn c8() -> Outcome {
    let cfg = Config::default();
    let run = run_scaling(&cfg).map_err(|e| e.to_string())?;
    let decades = (run.eps[run.eps.len() - 1] / run.eps[0]).log10();
    let exp = |k: &str| run.fits[k].as_ref().map(|f| f.exponent).map_err(|e| format!("{k}: {e}"));
    let mut ok = run.eps.len() >= 5 && decades >= 1.5;
    let mut parts = Vec::new();
    for k in ["A", "B", "C"] {
        let x = exp(k)?;
        ok &= (x - 1.0).abs() < 0.05;
        parts.push(format!("{k} {x:.3}"));
    }
    for k in ["E", "F", "A+E", "E-A", "A+F", "F-A"] {
        let x = exp(k)?;
        ok &= (x - 2.0).abs() < 0.1;
        parts.push(format!("{k} {x:.3}"));
    }
    let spread = run.c_over_a.iter().map(|r| (r / run.c_over_a[0] - 1.0).abs()).fold(0.0, f64::max);
    ok &= spread < 0.02;
    ensure(ok, format!("{} points over {decades:.1} decades; {}; C/A spread {spread:.1e}", run.eps.len(), parts.join(", ")))
}

fn c9() -> Outcome {
    let p = BeamParams::default();
    let vib = VibrationConfig::default_for(1e-4, &p);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for phi in [0.0, FRAC_PI_4, FRAC_PI_2] {
        let net = NestedMzi::new(phi).build();
        let wv = weak_values(&net, &NESTED_MIRRORS).map_err(|e| e.to_string())?;
        for z_d in [p.z_for_gouy(PI / 6.0), p.z_for_gouy(PI / 3.0), 1e6 * p.rayleigh_range()] {
            let pred = analytic_first_order(&wv, &vib, z_d, &p, &BTreeMap::new()).map_err(|e| e.to_string())?;
            let series = simulate_timeseries(&net, &vib, z_d, &p).map_err(|e| e.to_string())?;
            let s = power_spectrum(&series, &vib).map_err(|e| e.to_string())?;
            let scale = pred.values().fold(0.0f64, |m, v| m.max(v.abs()));
            for (tag, &expected) in &pred {
                // first-order peaks only; structurally null lines have no ratio
                if expected.abs() > NULL_THRESHOLD * scale {
                    worst = worst.max((s.peak(tag).unwrap().signed / expected - 1.0).abs());
                    cases += 1;
                }
            }
        }
    }
    ensure(worst < 1e-3, format!("{cases} first-order peaks, max |exact/predicted - 1| {worst:.2e}"))
}

fn c10() -> Outcome {
    let cfg = Config::parse("format = csv+svg", "acceptance").unwrap();
    type Runner = fn(&Config) -> Result<RunArtifacts, String>;
    let runners: [(&str, Runner); 4] = [
        ("original", |c| run_danan_original(c).map(|r| r.artifacts).map_err(|e| e.to_string())),
        ("pf", |c| run_pf_modification(c).map(|r| r.artifacts).map_err(|e| e.to_string())),
        ("sweep-zd", |c| run_zd_sweep(c).map(|r| r.artifacts).map_err(|e| e.to_string())),
        ("scaling", |c| run_scaling(c).map(|r| r.artifacts).map_err(|e| e.to_string())),
    ];
    let (first, second) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut compared = 0;
    for (name, run) in runners {
        let a = run(&cfg)?.write(first.path()).map_err(|e| e.to_string())?;
        let b = run(&cfg)?.write(second.path()).map_err(|e| e.to_string())?;
        for entry in std::fs::read_dir(&a).unwrap() {
            let file = entry.unwrap().file_name();
            if file.to_string_lossy().ends_with(".csv") {
                let same = std::fs::read(a.join(&file)).unwrap() == std::fs::read(b.join(&file)).unwrap();
                if !same {
                    return Err(format!("{name}/{} differs between runs", file.to_string_lossy()));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} CSV files bit-identical across two runs of 4 scenarios"))
}
