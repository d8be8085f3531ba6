use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::DynamicsError;
use crate::beam::BeamParams;

/// Default drive frequencies per unit time.
pub const DEFAULT_FREQUENCIES: [(&str, f64); 5] = [("A", 13.0), ("B", 17.0), ("C", 19.0), ("E", 23.0), ("F", 29.0)];

const FREQ_TOL: f64 = 1e-9;

/// Sinusoidal tilt `amplitude·sin(2π·frequency·t + phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drive {
    pub frequency: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl Drive {
    pub fn new(frequency: f64, amplitude: f64) -> Self {
        Self { frequency, amplitude, phase: 0.0 }
    }

    pub fn tilt(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * (2.0 * PI * self.frequency * t + self.phase).sin()
    }
}

/// Per-mirror drives plus the sampling window.
#[derive(Clone, Debug, PartialEq)]
pub struct VibrationConfig {
    pub drives: BTreeMap<String, Drive>,
    pub sample_rate: f64,
    pub duration: f64,
}

impl VibrationConfig {
    /// Five mirrors at the default frequencies, all with kick strength `eps = k·w0·θ`.
    pub fn default_for(eps: f64, beam: &BeamParams) -> Self {
        let theta = beam.theta_for_eps(eps);
        let drives = DEFAULT_FREQUENCIES.iter().map(|&(tag, f)| (tag.to_string(), Drive::new(f, theta))).collect();
        Self { drives, sample_rate: 512.0, duration: 1.0 }
    }

    /// Same table with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for d in out.drives.values_mut() {
            d.amplitude *= factor;
        }
        out
    }

    pub fn with_amplitude(mut self, tag: &str, amplitude: f64) -> Self {
        if let Some(d) = self.drives.get_mut(tag) {
            d.amplitude = amplitude;
        }
        self
    }

    /// Keep only the listed mirrors driven; the rest get zero amplitude.
    pub fn only(mut self, tags: &[&str]) -> Self {
        for (tag, d) in self.drives.iter_mut() {
            if !tags.contains(&tag.as_str()) {
                d.amplitude = 0.0;
            }
        }
        self
    }

    pub fn n_samples(&self) -> usize {
        libm::round(self.duration * self.sample_rate) as usize
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 / self.sample_rate
    }

    pub fn tilt(&self, tag: &str, t: f64) -> f64 {
        self.drives.get(tag).map_or(0.0, |d| d.tilt(t))
    }

    /// DFT bin index of a frequency.
    pub fn bin_of(&self, frequency: f64) -> usize {
        libm::round(frequency * self.duration) as usize
    }

    /// Drive-frequency intermodulation lines `(label, frequency)`: sums for all
    /// pairs and absolute differences for distinct pairs.
    pub fn combination_lines(&self) -> Vec<(String, String, bool, f64)> {
        let tags: Vec<(&String, &Drive)> = self.drives.iter().collect();
        let mut out = Vec::new();
        for (i, (a, da)) in tags.iter().enumerate() {
            for (b, db) in tags.iter().skip(i + 1) {
                out.push(((*a).clone(), (*b).clone(), true, da.frequency + db.frequency));
                out.push(((*a).clone(), (*b).clone(), false, (da.frequency - db.frequency).abs()));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidVibration(msg));
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return bad(format!("sample_rate must be positive, got {}", self.sample_rate));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        let n = self.duration * self.sample_rate;
        if (n - libm::round(n)).abs() > FREQ_TOL * n.max(1.0) || n < 2.0 {
            return bad(format!("duration x sample_rate = {n} is not an integer sample count >= 2"));
        }
        if self.drives.is_empty() {
            return bad("no mirrors driven".to_string());
        }
        for (tag, d) in &self.drives {
            if !(d.frequency.is_finite() && d.frequency > 0.0) {
                return bad(format!("{tag}.frequency must be positive, got {}", d.frequency));
            }
            if !d.amplitude.is_finite() || !d.phase.is_finite() {
                return bad(format!("{tag}: amplitude and phase must be finite"));
            }
            let cycles = d.frequency * self.duration;
            if (cycles - libm::round(cycles)).abs() > FREQ_TOL * cycles.max(1.0) {
                return bad(format!("{tag}.frequency x duration = {cycles} is not an integer"));
            }
        }
        let list: Vec<(&String, f64)> = self.drives.iter().map(|(t, d)| (t, d.frequency)).collect();
        let same = |a: f64, b: f64| (a - b).abs() <= FREQ_TOL * a.abs().max(b.abs()).max(1.0);
        let mut max_sum = 0.0f64;
        for (i, &(a, fa)) in list.iter().enumerate() {
            for &(b, fb) in &list[i + 1..] {
                if same(fa, fb) {
                    return bad(format!("{a} and {b} share frequency {fa}"));
                }
            }
            for &(b, fb) in &list[i..] {
                max_sum = max_sum.max(fa + fb);
                for &(k, fk) in &list {
                    if same(fk, fa + fb) {
                        return bad(format!("{k} frequency {fk} collides with {a}+{b}"));
                    }
                    if a != b && same(fk, (fa - fb).abs()) {
                        return bad(format!("{k} frequency {fk} collides with |{a}-{b}|"));
                    }
                }
            }
        }
        if self.sample_rate <= 2.0 * max_sum {
            return bad(format!("sample_rate {} must exceed 2 x max(f_m + f_n) = {}", self.sample_rate, 2.0 * max_sum));
        }
        Ok(())
    }
}
