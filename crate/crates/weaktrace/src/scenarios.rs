//! Canned end-to-end experiments. Each run computes everything in memory and
//! returns its tables; writing happens afterwards through [`RunArtifacts::write`].
//!
//! Sweep points run on the rayon pool; each point is computed sequentially and
//! results are collected in grid order, so output is bit-identical for any
//! worker count.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use weaktrace_core::dynamics::{ScalingFit, FIT_FLOOR};
use weaktrace_core::netgraph::NESTED_MIRRORS;
use weaktrace_core::{
    fit_scaling_exponent, power_spectrum, simulate_timeseries, trace_report, weak_values, SpectrumReport,
    TraceReport, WeakValueReport,
};

use crate::config::{Config, DetectorDistance, PhiC};
use crate::manifest::RunArtifacts;
use crate::svg::{Plot, Style};
use crate::tables;
use crate::Error;

/// Lines weaker than this fraction of the dominant peak count as absent.
pub const NULL_THRESHOLD: f64 = 1e-3;

/// Pass/fail statement recorded in the manifest notes.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.into(), pass, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "ok" } else { "FAILED" }, self.name, self.detail)
    }
}

fn record(artifacts: &mut RunArtifacts, checks: &[Check]) {
    for c in checks {
        artifacts.note(c.line());
    }
}

fn spectrum_at(cfg: &Config, phi_c: f64, z_d: f64, eps: f64) -> Result<SpectrumReport, Error> {
    let vib = cfg.vibration(eps);
    let series = simulate_timeseries(&cfg.network(phi_c), &vib, z_d, &cfg.beam())?;
    Ok(power_spectrum(&series, &vib)?)
}

fn traces_at(cfg: &Config, phi_c: f64, eps: f64) -> Result<TraceReport, Error> {
    Ok(trace_report(&cfg.network(phi_c), &cfg.vibration(eps), &cfg.beam(), &NESTED_MIRRORS)?)
}

fn weak_table(cfg: &Config, phi_c: f64, z_d: Option<f64>) -> Result<WeakValueReport, Error> {
    Ok(weak_values(&cfg.network(phi_c), &NESTED_MIRRORS)?.with_config(Some(phi_c), z_d))
}

fn spectrum_plot(title: &str, rep: &SpectrumReport, source_hash: &str) -> String {
    let pts = rep.one_sided().map(|b| (b.frequency, b.value.norm())).collect();
    Plot::new(title, "frequency", "|bin|").series("quad-cell spectrum", Style::Stems, pts).source("spectrum_quadcell.csv", source_hash).render()
}

fn add_spectrum(artifacts: &mut RunArtifacts, cfg: &Config, title: &str, rep: &SpectrumReport) {
    let hash = artifacts.add("spectrum_quadcell.csv", tables::spectrum_csv(rep));
    artifacts.add("spectrum_lines.csv", tables::lines_csv(rep));
    if cfg.format.svg() {
        artifacts.add("spectrum.svg", spectrum_plot(title, rep, &hash));
    }
}

/// Weak values only, at `phi_c` (default 0).
pub fn run_weak_values(cfg: &Config) -> Result<(WeakValueReport, RunArtifacts), Error> {
    cfg.validate()?;
    let phi_c = cfg.phi_c_or(0.0);
    let wv = weak_table(cfg, phi_c, None)?;
    let mut artifacts = RunArtifacts::new("weak-values", cfg.dump());
    artifacts.add("weak_values.csv", tables::weak_values_csv(&wv));
    Ok((wv, artifacts))
}

#[derive(Clone, Debug)]
pub struct OriginalRun {
    pub weak: WeakValueReport,
    pub spectrum: SpectrumReport,
    pub traces: TraceReport,
    pub checks: Vec<Check>,
    pub artifacts: RunArtifacts,
}

/// Unmodified interferometer (`phi_c = 0`) read at `z_d`.
pub fn run_danan_original(cfg: &Config) -> Result<OriginalRun, Error> {
    cfg.validate()?;
    if let PhiC::Value(v) = cfg.phi_c {
        if v != 0.0 {
            return Err(Error::Validation(format!("`phi_c`: the original scenario needs phi_c = 0 (or auto), got {v}")));
        }
    }
    let z_d = cfg.z_detector();
    let weak = weak_table(cfg, 0.0, Some(z_d))?;
    let (spectrum, traces) = rayon::join(|| spectrum_at(cfg, 0.0, z_d, cfg.eps), || traces_at(cfg, 0.0, cfg.eps));
    let (spectrum, traces) = (spectrum?, traces?);

    let c = spectrum.peak_magnitude("C");
    let mut checks = Vec::new();
    for tag in ["A", "B"] {
        let r = spectrum.peak_magnitude(tag) / c;
        checks.push(Check::new(&format!("peak {tag}/C"), (r - 1.0).abs() < 0.01, format!("{r:.6}")));
    }
    for tag in ["E", "F"] {
        let r = spectrum.peak_magnitude(tag) / c;
        checks.push(Check::new(&format!("peak {tag}/C"), r < NULL_THRESHOLD, format!("{r:.3e} (threshold {NULL_THRESHOLD:e})")));
    }

    let mut artifacts = RunArtifacts::new("original", cfg.dump());
    artifacts.add("weak_values.csv", tables::weak_values_csv(&weak));
    add_spectrum(&mut artifacts, cfg, "original configuration", &spectrum);
    artifacts.add("traces.csv", tables::traces_csv(&traces, &[]));
    record(&mut artifacts, &checks);
    Ok(OriginalRun { weak, spectrum, traces, checks, artifacts })
}

#[derive(Clone, Debug)]
pub struct PfRun {
    pub phi_c: f64,
    pub weak: WeakValueReport,
    pub spectrum: SpectrumReport,
    pub traces: TraceReport,
    pub original_traces: TraceReport,
    pub checks: Vec<Check>,
    pub artifacts: RunArtifacts,
}

/// Path phase matched to the detector's Gouy phase; `far` uses exactly π/2.
pub fn pf_phase(cfg: &Config) -> f64 {
    match cfg.z_d {
        DetectorDistance::Far => FRAC_PI_2,
        DetectorDistance::At(z) => cfg.beam().gouy(z),
    }
}

/// Modified interferometer: `phi_c = ζ(z_d)` unless set explicitly.
pub fn run_pf_modification(cfg: &Config) -> Result<PfRun, Error> {
    cfg.validate()?;
    let z_d = cfg.z_detector();
    let phi_c = cfg.phi_c_or(pf_phase(cfg));
    let weak = weak_table(cfg, phi_c, Some(z_d))?;
    let (spectrum, (traces, original_traces)) = rayon::join(
        || spectrum_at(cfg, phi_c, z_d, cfg.eps),
        || rayon::join(|| traces_at(cfg, phi_c, cfg.eps), || traces_at(cfg, 0.0, cfg.eps)),
    );
    let (spectrum, traces, original_traces) = (spectrum?, traces?, original_traces?);

    let c = spectrum.peak_magnitude("C");
    let mut checks = Vec::new();
    for tag in ["A", "B", "E", "F"] {
        let r = spectrum.peak_magnitude(tag) / c;
        checks.push(Check::new(&format!("peak {tag}/C"), r < NULL_THRESHOLD, format!("{r:.3e} (threshold {NULL_THRESHOLD:e})")));
    }
    let mut comparison = Vec::new();
    for tag in NESTED_MIRRORS {
        let (now, before) = (traces.strength(tag), original_traces.strength(tag));
        let ratio = if before > 0.0 { now / before } else { f64::NAN };
        comparison.push((tag, before, now, ratio));
        if ["A", "B"].contains(&tag) {
            checks.push(Check::new(&format!("trace {tag} vs original"), (ratio - 1.0).abs() < 0.01, format!("ratio {ratio:.6}")));
        }
    }

    let mut artifacts = RunArtifacts::new("pf", cfg.dump());
    artifacts.add("weak_values.csv", tables::weak_values_csv(&weak));
    add_spectrum(&mut artifacts, cfg, &format!("phi_c = {phi_c:.4}"), &spectrum);
    artifacts.add("traces.csv", tables::traces_csv(&traces, &[]));
    artifacts.add("trace_comparison.csv", trace_comparison_csv(&comparison));
    record(&mut artifacts, &checks);
    Ok(PfRun { phi_c, weak, spectrum, traces, original_traces, checks, artifacts })
}

fn trace_comparison_csv(rows: &[(&str, f64, f64, f64)]) -> String {
    let mut out = String::from("mirror,original,modified,ratio\n");
    for (tag, before, now, ratio) in rows {
        out.push_str(&format!("{tag},{},{},{}\n", tables::num(*before), tables::num(*now), tables::num(*ratio)));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub zeta: f64,
    pub z_d: f64,
    /// In-phase peak amplitude per mirror.
    pub signed: BTreeMap<String, f64>,
    pub magnitude: BTreeMap<String, f64>,
    /// `|peak_A| / (2√(2/π)·ε)`: the first-order peak in units of its far-field maximum.
    pub normalized_a: f64,
    /// `|sin(ζ − phi_c)|`.
    pub law: f64,
}

#[derive(Clone, Debug)]
pub struct SweepRun {
    pub phi_c: f64,
    pub points: Vec<SweepPoint>,
    /// Least-squares scale of `normalized_a` onto `law`.
    pub scale: f64,
    /// RMS misfit after scaling, relative to the RMS of the scaled law.
    pub relative_rms: f64,
    pub checks: Vec<Check>,
    pub artifacts: RunArtifacts,
}

pub fn zeta_grid(cfg: &Config) -> Vec<f64> {
    let n = cfg.sweep_points;
    (0..n).map(|i| cfg.sweep_zeta_min + (cfg.sweep_zeta_max - cfg.sweep_zeta_min) * i as f64 / (n - 1) as f64).collect()
}

/// Detector moved through Gouy phases `ζ ∈ [sweep.zeta_min, sweep.zeta_max]` at fixed `phi_c` (default π/2).
pub fn run_zd_sweep(cfg: &Config) -> Result<SweepRun, Error> {
    cfg.validate()?;
    let phi_c = cfg.phi_c_or(FRAC_PI_2);
    let beam = cfg.beam();
    let unit = 2.0 * (2.0 / PI).sqrt() * cfg.eps;
    let points = zeta_grid(cfg)
        .into_par_iter()
        .map(|zeta| {
            let z_d = beam.z_for_gouy(zeta);
            let s = spectrum_at(cfg, phi_c, z_d, cfg.eps)?;
            let signed = s.peaks.iter().map(|(t, p)| (t.clone(), p.signed)).collect();
            let magnitude = s.peaks.iter().map(|(t, p)| (t.clone(), p.magnitude())).collect();
            let normalized_a = 2.0 * s.peak_magnitude("A") / unit;
            Ok(SweepPoint { zeta, z_d, signed, magnitude, normalized_a, law: (zeta - phi_c).sin().abs() })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let num: f64 = points.iter().map(|p| p.normalized_a * p.law).sum();
    let den: f64 = points.iter().map(|p| p.law * p.law).sum();
    let scale = if den > 0.0 { num / den } else { 0.0 };
    let misfit: f64 = points.iter().map(|p| (p.normalized_a - scale * p.law).powi(2)).sum();
    let relative_rms = if den > 0.0 { (misfit / (scale * scale * den)).sqrt() } else { f64::NAN };

    let worst_e = points.iter().map(|p| p.magnitude["E"].max(p.magnitude["F"]) / p.magnitude["C"]).fold(0.0, f64::max);
    let checks = vec![
        Check::new("peak A follows |sin(zeta - phi_c)|", relative_rms < 0.02, format!("relative RMS {relative_rms:.3e}, scale {scale:.6}")),
        Check::new("peaks E,F below threshold at every point", worst_e < NULL_THRESHOLD, format!("worst ratio to C {worst_e:.3e}")),
    ];

    let mut header: Vec<String> = vec!["zeta".into(), "z_d".into(), "width".into()];
    header.extend(NESTED_MIRRORS.iter().map(|t| format!("peak_{t}")));
    header.extend(NESTED_MIRRORS.iter().map(|t| format!("abs_{t}")));
    header.extend(["norm_A".into(), "law".into()]);
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut r = vec![p.zeta, p.z_d, beam.width_at(p.z_d)];
            r.extend(NESTED_MIRRORS.iter().map(|t| p.signed[*t]));
            r.extend(NESTED_MIRRORS.iter().map(|t| p.magnitude[*t]));
            r.extend([p.normalized_a, p.law]);
            r
        })
        .collect();

    let mut artifacts = RunArtifacts::new("sweep-zd", cfg.dump());
    artifacts.add("weak_values.csv", tables::weak_values_csv(&weak_table(cfg, phi_c, None)?));
    let hash = artifacts.add("sweep.csv", tables::table_csv(&header, &rows));
    if cfg.format.svg() {
        let svg = Plot::new(&format!("detector sweep, phi_c = {phi_c:.4}"), "Gouy phase at detector", "normalized |peak A|")
            .series("simulated", Style::Markers, points.iter().map(|p| (p.zeta, p.normalized_a)).collect())
            .series("scaled |sin(zeta - phi_c)|", Style::Line, points.iter().map(|p| (p.zeta, scale * p.law)).collect())
            .source("sweep.csv", &hash)
            .render();
        artifacts.add("sweep.svg", svg);
    }
    artifacts.note("normalization: |peak| / (2*sqrt(2/pi)*eps); the quad-cell ratio already divides out w(z_d)");
    record(&mut artifacts, &checks);
    Ok(SweepRun { phi_c, points, scale, relative_rms, checks, artifacts })
}

#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub eps: Vec<f64>,
    pub reports: Vec<TraceReport>,
    /// Fits per mirror tag and per intermodulation label; `Err` holds the reason no exponent exists.
    pub fits: BTreeMap<String, Result<ScalingFit, String>>,
    /// `trace(C)/trace(A)` at each grid point.
    pub c_over_a: Vec<f64>,
    pub checks: Vec<Check>,
    pub artifacts: RunArtifacts,
}

pub fn eps_grid(cfg: &Config) -> Vec<f64> {
    let n = cfg.scaling_points;
    let (lo, hi) = (cfg.scaling_eps_min.ln(), cfg.scaling_eps_max.ln());
    (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Trace strengths over an ε grid with log-log exponent fits.
pub fn run_scaling(cfg: &Config) -> Result<ScalingRun, Error> {
    cfg.validate()?;
    let phi_c = cfg.phi_c_or(0.0);
    let eps = eps_grid(cfg);
    let mut reports = eps.par_iter().map(|&e| traces_at(cfg, phi_c, e)).collect::<Result<Vec<_>, Error>>()?;
    let mut artifacts = RunArtifacts::new("scaling", cfg.dump());

    let mut keys: Vec<String> = NESTED_MIRRORS.iter().map(|t| t.to_string()).collect();
    keys.extend(reports[0].lines.keys().cloned());
    let value = |r: &TraceReport, key: &str| r.lines.get(key).copied().unwrap_or_else(|| r.strength(key));
    let mut fits = BTreeMap::new();
    for key in &keys {
        let samples: Vec<(f64, f64)> = eps.iter().zip(&reports).map(|(&e, r)| (e, value(r, key))).collect();
        let usable: Vec<(f64, f64)> = samples.iter().copied().filter(|&(_, m)| m > FIT_FLOOR).collect();
        if usable.len() < samples.len() {
            artifacts.note(format!("{key}: {} of {} samples below floor {FIT_FLOOR:e}, excluded", samples.len() - usable.len(), samples.len()));
        }
        fits.insert(key.clone(), fit_scaling_exponent(&usable).map_err(|e| e.to_string()));
    }

    let c_over_a: Vec<f64> = reports.iter().map(|r| r.strength("C") / r.strength("A")).collect();
    let spread = c_over_a.iter().map(|r| (r / c_over_a[0] - 1.0).abs()).fold(0.0, f64::max);
    let exponent = |key: &str| fits[key].as_ref().map(|f| f.exponent).unwrap_or(f64::NAN);
    let mut checks = Vec::new();
    for tag in ["A", "B", "C"] {
        let x = exponent(tag);
        checks.push(Check::new(&format!("exponent {tag}"), (x - 1.0).abs() < 0.05, format!("{x:.4}")));
    }
    for key in ["E", "F", "A+E", "E-A", "A+F", "F-A"] {
        let x = exponent(key);
        checks.push(Check::new(&format!("exponent {key}"), (x - 2.0).abs() < 0.1, format!("{x:.4}")));
    }
    checks.push(Check::new("trace C/A constant", spread < 0.02, format!("max relative spread {spread:.3e}")));

    let mut header: Vec<String> = vec!["eps".into()];
    header.extend(keys.iter().map(|k| format!("trace_{k}")));
    let rows: Vec<Vec<f64>> = eps
        .iter()
        .zip(&reports)
        .map(|(&e, r)| std::iter::once(e).chain(keys.iter().map(|k| value(r, k))).collect())
        .collect();
    let hash = artifacts.add("sweep.csv", tables::table_csv(&header, &rows));

    // strengths at the configured eps, exponents from the grid
    let mut at_eps = traces_at(cfg, phi_c, cfg.eps)?;
    let mut line_fits = Vec::new();
    for (key, fit) in &fits {
        if let Ok(f) = fit {
            if at_eps.mirrors.contains_key(key) {
                at_eps.set_fit(key, f);
            } else {
                line_fits.push((key.clone(), *f));
            }
        }
    }
    artifacts.add("traces.csv", tables::traces_csv(&at_eps, &line_fits));
    if cfg.format.svg() {
        let mut plot = Plot::new("trace strength vs eps", "eps", "trace strength");
        plot.log_x = true;
        plot.log_y = true;
        for key in ["A", "C", "E", "F", "E-A"] {
            let pts = eps.iter().zip(&reports).map(|(&e, r)| (e, value(r, key))).collect();
            plot = plot.series(key, if key.len() == 1 { Style::Line } else { Style::Markers }, pts);
        }
        artifacts.add("scaling.svg", plot.source("sweep.csv", &hash).render());
    }
    record(&mut artifacts, &checks);
    for r in &mut reports {
        for (key, fit) in &fits {
            if let Ok(f) = fit {
                r.set_fit(key, f);
            }
        }
    }
    Ok(ScalingRun { eps, reports, fits, c_over_a, checks, artifacts })
}
