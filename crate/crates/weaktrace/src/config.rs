//! Flat `key = value` configuration with command-line overrides.
//!
//! Every key has a concrete default and [`Config::dump`] writes all of them, so
//! a dump re-parses to the same effective configuration.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::PathBuf;

use weaktrace_core::dynamics::{Drive, DEFAULT_FREQUENCIES};
use weaktrace_core::netgraph::{parse_angle, NESTED_MIRRORS};
use weaktrace_core::{BeamParams, NestedMzi, Network, VibrationConfig};

/// Detector distance multiplier used for `z_d = far`.
pub const FAR_RAYLEIGH_MULTIPLE: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiC {
    /// Scenario default: 0 for the original run, ζ(z_d) for the PF run, π/2 for sweeps.
    Auto,
    Value(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DetectorDistance {
    Far,
    At(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    CsvSvg,
}

impl Format {
    pub fn svg(self) -> bool {
        self == Format::CsvSvg
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub phi_c: PhiC,
    pub z_d: DetectorDistance,
    pub eps: f64,
    pub seed: u64,
    pub format: Format,
    pub out: PathBuf,
    pub w0: f64,
    pub wavelength: f64,
    pub imbalance: f64,
    pub z: BTreeMap<String, f64>,
    pub freq: BTreeMap<String, f64>,
    pub phase: BTreeMap<String, f64>,
    pub sample_rate: f64,
    pub duration: f64,
    pub sweep_points: usize,
    pub sweep_zeta_min: f64,
    pub sweep_zeta_max: f64,
    pub scaling_points: usize,
    pub scaling_eps_min: f64,
    pub scaling_eps_max: f64,
}

impl Default for Config {
    fn default() -> Self {
        let beam = BeamParams::default();
        let per_mirror = |v: f64| NESTED_MIRRORS.iter().map(|t| (t.to_string(), v)).collect();
        Self {
            phi_c: PhiC::Auto,
            z_d: DetectorDistance::Far,
            eps: 1e-3,
            seed: 0,
            format: Format::Csv,
            out: PathBuf::from("out"),
            w0: beam.w0,
            wavelength: beam.wavelength,
            imbalance: 0.0,
            z: per_mirror(0.0),
            freq: DEFAULT_FREQUENCIES.iter().map(|&(t, f)| (t.to_string(), f)).collect(),
            phase: per_mirror(0.0),
            sample_rate: 512.0,
            duration: 1.0,
            sweep_points: 12,
            sweep_zeta_min: 0.1,
            sweep_zeta_max: 1.5,
            scaling_points: 7,
            scaling_eps_min: 1e-4,
            scaling_eps_max: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: unknown key `{key}`; valid keys: {}", valid_keys().join(", "))]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: bad value `{value}` for `{key}`: {reason}")]
    BadValue { origin: String, key: String, value: String, reason: String },
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: String, text: String },
    #[error("`{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("cannot read config {path}: {reason}")]
    Io { path: String, reason: String },
}

const SCALAR_KEYS: [&str; 17] = [
    "phi_c",
    "z_d",
    "eps",
    "seed",
    "format",
    "out",
    "w0",
    "wavelength",
    "imbalance",
    "sample_rate",
    "duration",
    "sweep.points",
    "sweep.zeta_min",
    "sweep.zeta_max",
    "scaling.points",
    "scaling.eps_min",
    "scaling.eps_max",
];

/// All accepted keys, in dump order.
pub fn valid_keys() -> Vec<String> {
    let mut keys: Vec<String> = SCALAR_KEYS.iter().map(|k| k.to_string()).collect();
    for prefix in ["z", "freq", "phase"] {
        keys.extend(NESTED_MIRRORS.iter().map(|t| format!("{prefix}.{t}")));
    }
    keys
}

impl fmt::Display for PhiC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiC::Auto => f.write_str("auto"),
            PhiC::Value(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for DetectorDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorDistance::Far => f.write_str("far"),
            DetectorDistance::At(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::CsvSvg => "csv+svg",
        })
    }
}

impl Config {
    /// Defaults overlaid with the `key = value` lines of `text`.
    /// `origin` names the source in diagnostics (a path, or `--set`).
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text, origin)?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let here = format!("{origin}:{}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { origin: here.clone(), text: line.to_string() })?;
            self.set(key.trim(), value.trim(), &here)?;
        }
        Ok(())
    }

    /// Apply one override. Values accept `pi` arithmetic wherever a number is expected.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::BadValue {
            origin: origin.to_string(),
            key: key.to_string(),
            value: value.to_string(),
            reason,
        };
        let float = || parse_angle(value).map_err(bad);
        let count = || value.parse::<usize>().map_err(|e| bad(e.to_string()));
        match key {
            "phi_c" => self.phi_c = if value == "auto" { PhiC::Auto } else { PhiC::Value(float()?) },
            "z_d" => self.z_d = if value == "far" { DetectorDistance::Far } else { DetectorDistance::At(float()?) },
            "eps" => self.eps = float()?,
            "seed" => self.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "csv+svg" => Format::CsvSvg,
                    _ => return Err(bad("expected `csv` or `csv+svg`".into())),
                }
            }
            "out" => {
                if value.is_empty() {
                    return Err(bad("empty path".into()));
                }
                self.out = PathBuf::from(value)
            }
            "w0" => self.w0 = float()?,
            "wavelength" => self.wavelength = float()?,
            "imbalance" => self.imbalance = float()?,
            "sample_rate" => self.sample_rate = float()?,
            "duration" => self.duration = float()?,
            "sweep.points" => self.sweep_points = count()?,
            "sweep.zeta_min" => self.sweep_zeta_min = float()?,
            "sweep.zeta_max" => self.sweep_zeta_max = float()?,
            "scaling.points" => self.scaling_points = count()?,
            "scaling.eps_min" => self.scaling_eps_min = float()?,
            "scaling.eps_max" => self.scaling_eps_max = float()?,
            _ => {
                let table = match key.split_once('.') {
                    Some(("z", tag)) if NESTED_MIRRORS.contains(&tag) => &mut self.z,
                    Some(("freq", tag)) if NESTED_MIRRORS.contains(&tag) => &mut self.freq,
                    Some(("phase", tag)) if NESTED_MIRRORS.contains(&tag) => &mut self.phase,
                    _ => return Err(ConfigError::UnknownKey { origin: origin.to_string(), key: key.to_string() }),
                };
                let tag = key.split_once('.').map(|(_, t)| t.to_string()).unwrap_or_default();
                table.insert(tag, float()?);
            }
        }
        Ok(())
    }

    /// Every key with its effective value; re-parses to an equal `Config`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("phi_c", self.phi_c.to_string());
        line("z_d", self.z_d.to_string());
        line("eps", self.eps.to_string());
        line("seed", self.seed.to_string());
        line("format", self.format.to_string());
        line("out", self.out.display().to_string());
        line("w0", self.w0.to_string());
        line("wavelength", self.wavelength.to_string());
        line("imbalance", self.imbalance.to_string());
        line("sample_rate", self.sample_rate.to_string());
        line("duration", self.duration.to_string());
        line("sweep.points", self.sweep_points.to_string());
        line("sweep.zeta_min", self.sweep_zeta_min.to_string());
        line("sweep.zeta_max", self.sweep_zeta_max.to_string());
        line("scaling.points", self.scaling_points.to_string());
        line("scaling.eps_min", self.scaling_eps_min.to_string());
        line("scaling.eps_max", self.scaling_eps_max.to_string());
        for (prefix, table) in [("z", &self.z), ("freq", &self.freq), ("phase", &self.phase)] {
            for tag in NESTED_MIRRORS {
                line(&format!("{prefix}.{tag}"), table[tag].to_string());
            }
        }
        out
    }

    /// Range checks that do not depend on the scenario.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &str, reason: &str| Err(ConfigError::Invalid { key: key.into(), reason: reason.into() });
        if !(self.w0 > 0.0 && self.w0.is_finite()) {
            return invalid("w0", "must be positive");
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return invalid("wavelength", "must be positive");
        }
        if !(self.eps > 0.0 && self.eps <= 0.1) {
            return invalid("eps", "must lie in (0, 0.1] (paraxial small-kick regime)");
        }
        if let DetectorDistance::At(z) = self.z_d {
            if !z.is_finite() {
                return invalid("z_d", "must be finite or `far`");
            }
        }
        if self.sweep_points < 2 {
            return invalid("sweep.points", "need at least 2 points");
        }
        if !(0.0 < self.sweep_zeta_min && self.sweep_zeta_min < self.sweep_zeta_max && self.sweep_zeta_max < FRAC_PI_2) {
            return invalid("sweep.zeta_min", "need 0 < sweep.zeta_min < sweep.zeta_max < pi/2");
        }
        if self.scaling_points < 5 {
            return invalid("scaling.points", "need at least 5 points");
        }
        if !(self.scaling_eps_min > 0.0 && self.scaling_eps_max <= 0.1) {
            return invalid("scaling.eps_min", "eps grid must lie in (0, 0.1]");
        }
        if (self.scaling_eps_max / self.scaling_eps_min).log10() < 1.5 {
            return invalid("scaling.eps_max", "eps grid must span at least 1.5 decades");
        }
        self.vibration(self.eps).validate().map_err(|e| ConfigError::Invalid {
            key: "freq/sample_rate/duration".into(),
            reason: e.to_string(),
        })
    }

    pub fn beam(&self) -> BeamParams {
        BeamParams { w0: self.w0, wavelength: self.wavelength }
    }

    pub fn z_detector(&self) -> f64 {
        match self.z_d {
            DetectorDistance::Far => FAR_RAYLEIGH_MULTIPLE * self.beam().rayleigh_range(),
            DetectorDistance::At(z) => z,
        }
    }

    /// Path phase for a scenario whose `auto` value is `fallback`.
    pub fn phi_c_or(&self, fallback: f64) -> f64 {
        match self.phi_c {
            PhiC::Auto => fallback,
            PhiC::Value(v) => v,
        }
    }

    /// All five mirrors driven with kick strength `eps = k·w0·θ`.
    pub fn vibration(&self, eps: f64) -> VibrationConfig {
        let theta = self.beam().theta_for_eps(eps);
        let drives = NESTED_MIRRORS
            .iter()
            .map(|&t| (t.to_string(), Drive { frequency: self.freq[t], amplitude: theta, phase: self.phase[t] }))
            .collect();
        VibrationConfig { drives, sample_rate: self.sample_rate, duration: self.duration }
    }

    pub fn network(&self, phi_c: f64) -> Network {
        NestedMzi::new(phi_c).with_imbalance(self.imbalance).with_offsets(self.z.clone()).build()
    }
}
