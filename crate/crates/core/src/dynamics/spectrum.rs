use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{DynamicsError, VibrationConfig};
use crate::beam::QuadCellReading;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumBin {
    pub index: usize,
    /// Signed frequency in `(-rate/2, rate/2]`.
    pub frequency: f64,
    pub value: C64,
}

/// Spectral line at a mirror's drive frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub frequency: f64,
    pub value: C64,
    /// Amplitude of the component in phase with the drive: `Re[2i·X·e^{-iφ}]`.
    pub signed: f64,
}

impl Peak {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sideband {
    /// `"A+B"` or `"B-A"`, the higher-frequency mirror first for differences.
    pub label: String,
    pub frequency: f64,
    pub value: C64,
}

/// DFT `X_k = (1/N) Σ s_n e^{-2πikn/N}` of the normalized difference signal.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub bins: Vec<SpectrumBin>,
    pub peaks: BTreeMap<String, Peak>,
    pub sidebands: Vec<Sideband>,
    pub mean_square: f64,
}

impl SpectrumReport {
    pub fn peak(&self, tag: &str) -> Option<&Peak> {
        self.peaks.get(tag)
    }

    pub fn peak_magnitude(&self, tag: &str) -> f64 {
        self.peaks.get(tag).map_or(0.0, Peak::magnitude)
    }

    pub fn sideband(&self, label: &str) -> Option<&Sideband> {
        self.sidebands.iter().find(|s| s.label == label)
    }

    /// `Σ|X_k|²`; equals the time-domain mean square.
    pub fn bin_power(&self) -> f64 {
        self.bins.iter().map(|b| b.value.norm_sqr()).sum()
    }

    /// Bins with non-negative frequency, in increasing order.
    pub fn one_sided(&self) -> impl Iterator<Item = &SpectrumBin> {
        self.bins.iter().filter(|b| b.frequency >= 0.0)
    }
}

/// Direct DFT with a shared twiddle table.
pub(crate) fn dft(series: &[f64]) -> Vec<C64> {
    let n = series.len();
    let twiddle: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64)).collect();
    (0..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, &s) in series.iter().enumerate() {
                acc += twiddle[(k * j) % n] * s;
            }
            acc / n as f64
        })
        .collect()
}

/// Spectrum of the normalized quad-cell signal (dark samples count as 0).
pub fn power_spectrum(series: &[QuadCellReading], vib: &VibrationConfig) -> Result<SpectrumReport, DynamicsError> {
    vib.validate()?;
    let expected = vib.n_samples();
    if series.len() != expected {
        return Err(DynamicsError::LengthMismatch { expected, got: series.len() });
    }
    let signal: Vec<f64> = series.iter().map(QuadCellReading::signal).collect();
    Ok(spectrum_of(&signal, vib))
}

pub(crate) fn spectrum_of(signal: &[f64], vib: &VibrationConfig) -> SpectrumReport {
    let n = signal.len();
    let values = dft(signal);
    let bins: Vec<SpectrumBin> = values
        .iter()
        .enumerate()
        .map(|(k, &value)| {
            let signed_k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            SpectrumBin { index: k, frequency: signed_k / vib.duration, value }
        })
        .collect();
    let at = |f: f64| values[vib.bin_of(f) % n];

    let peaks = vib
        .drives
        .iter()
        .map(|(tag, d)| {
            let value = at(d.frequency);
            let signed = (C64::new(0.0, 2.0) * value * C64::from_polar(1.0, -d.phase)).re;
            (tag.clone(), Peak { frequency: d.frequency, value, signed })
        })
        .collect();

    let sidebands = vib
        .combination_lines()
        .into_iter()
        .map(|(a, b, sum, frequency)| {
            let label = if sum {
                format!("{a}+{b}")
            } else if vib.drives[&a].frequency >= vib.drives[&b].frequency {
                format!("{a}-{b}")
            } else {
                format!("{b}-{a}")
            };
            Sideband { label, frequency, value: at(frequency) }
        })
        .collect();

    let mean_square = signal.iter().map(|s| s * s).sum::<f64>() / n as f64;
    SpectrumReport { bins, peaks, sidebands, mean_square }
}
