use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{DynamicsError, ScalingFit, Simulator, VibrationConfig};
use crate::beam::{evaluate_superposition, BeamParams, GridSpec};
use crate::netgraph::Network;
use crate::C64;

/// Transverse samples of the full-field trace grid.
pub const TRACE_GRID_POINTS: usize = 256;
const TRACE_GRID_HALF_WIDTHS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    pub strength: f64,
    pub exponent: Option<f64>,
    pub residual: Option<f64>,
}

/// Full-field trace strengths per mirror and per intermodulation line.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport {
    pub mirrors: BTreeMap<String, TraceEntry>,
    /// `‖Ψ_L‖/‖Ψ_0‖` for every sum/difference line, keyed like the spectrum sidebands.
    pub lines: BTreeMap<String, f64>,
    /// `‖Ψ_0‖`, the time-averaged output field norm.
    pub dc_norm: f64,
}

impl TraceReport {
    pub fn strength(&self, tag: &str) -> f64 {
        self.mirrors.get(tag).map_or(0.0, |e| e.strength)
    }

    pub fn set_fit(&mut self, tag: &str, fit: &ScalingFit) {
        if let Some(e) = self.mirrors.get_mut(tag) {
            e.exponent = Some(fit.exponent);
            e.residual = Some(fit.residual);
        }
    }
}

/// Trace strengths from the output field, sampled in the waist plane.
///
/// Free propagation is unitary, so field norms do not depend on the plane.
/// The trace of mirror `m` is the part of the field that depends on its drive,
/// `Ψ(t) − Ψ(t)|θ_m=0`, as an RMS over the window divided by the norm of the
/// time-averaged field `‖Ψ_0‖`. Intermodulation lines are the norms of the
/// field's temporal Fourier components at `f_m + f_n` and `|f_m − f_n|`
/// (both signs), over the same reference.
pub fn trace_report(
    net: &Network,
    vib: &VibrationConfig,
    beam: &BeamParams,
    mirrors: &[&str],
) -> Result<TraceReport, DynamicsError> {
    let sim = Simulator::new(net, vib, beam)?;
    for tag in mirrors {
        if !net.mirrors().any(|(m, ..)| m == *tag) {
            return Err(DynamicsError::UnknownMirror(tag.to_string()));
        }
    }
    let n = vib.n_samples();
    let combos = vib.combination_lines();
    let muted: Vec<Option<usize>> = mirrors.iter().map(|t| sim.drive_index(t)).collect();

    let mut bins: BTreeSet<usize> = BTreeSet::new();
    bins.insert(0);
    for c in &combos {
        let k = vib.bin_of(c.3) % n;
        bins.insert(k);
        bins.insert((n - k) % n);
    }
    let bins: Vec<usize> = bins.into_iter().collect();

    let half = TRACE_GRID_HALF_WIDTHS * beam.w0 + sim.centroid_bound(0.0);
    let spec = GridSpec::centered(TRACE_GRID_POINTS, half);
    let xs: Vec<f64> = (0..spec.n).map(|i| spec.x(i)).collect();
    let twiddle: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64)).collect();
    let mut acc = vec![vec![C64::new(0.0, 0.0); spec.n]; bins.len()];
    let mut dependent = vec![0.0f64; mirrors.len()];
    for step in 0..n {
        let t = vib.time(step);
        let beams = sim.beams_at(t, 0.0);
        let field = evaluate_superposition(&beams, &spec)?;
        for (slot, &k) in acc.iter_mut().zip(&bins) {
            let w = twiddle[(k * step) % n];
            for (a, s) in slot.iter_mut().zip(&field.samples) {
                *a += s * w;
            }
        }
        for (sum, m) in dependent.iter_mut().zip(&muted) {
            let Some(_) = m else { continue };
            let quiet = sim.beams_muted(t, 0.0, *m);
            for &x in &xs {
                let mut d = C64::new(0.0, 0.0);
                for (loud, calm) in beams.iter().zip(&quiet) {
                    if loud != calm {
                        d += loud.field(x) - calm.field(x);
                    }
                }
                *sum += d.norm_sqr() * spec.dx;
            }
        }
    }
    let scale = 1.0 / (n as f64 * n as f64);
    let power: BTreeMap<usize, f64> = bins
        .iter()
        .zip(&acc)
        .map(|(&k, slot)| (k, slot.iter().map(|a| a.norm_sqr()).sum::<f64>() * spec.dx * scale))
        .collect();
    let dc_norm = power[&0].sqrt();
    if dc_norm == 0.0 {
        return Err(DynamicsError::ZeroOverlap);
    }

    let mirrors = mirrors
        .iter()
        .zip(&dependent)
        .map(|(tag, &sum)| {
            let strength = (sum / n as f64).sqrt() / dc_norm;
            (tag.to_string(), TraceEntry { strength, exponent: None, residual: None })
        })
        .collect();
    let lines = combos
        .into_iter()
        .map(|(a, b, sum, f)| {
            let label = if sum {
                format!("{a}+{b}")
            } else if vib.drives[&a].frequency >= vib.drives[&b].frequency {
                format!("{a}-{b}")
            } else {
                format!("{b}-{a}")
            };
            let k = vib.bin_of(f) % n;
            (label, (power[&k] + power[&((n - k) % n)]).sqrt() / dc_norm)
        })
        .collect();
    Ok(TraceReport { mirrors, lines, dc_norm })
}

/// Trace strength of a single mirror; see [`trace_report`].
pub fn trace_strength(net: &Network, vib: &VibrationConfig, beam: &BeamParams, tag: &str) -> Result<f64, DynamicsError> {
    Ok(trace_report(net, vib, beam, &[tag])?.strength(tag))
}
