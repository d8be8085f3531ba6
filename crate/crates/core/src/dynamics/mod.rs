//! Vibrating mirrors, quad-cell time series, spectra, traces and power-law fits.

mod fit;
mod predictor;
mod simulate;
mod spectrum;
mod trace;
mod vibration;

pub use fit::{fit_scaling_exponent, FitError, ScalingFit, FIT_FLOOR};
pub use predictor::analytic_first_order;
pub use simulate::{simulate_timeseries, Simulator};
pub use spectrum::{power_spectrum, Peak, Sideband, SpectrumBin, SpectrumReport};
pub use trace::{trace_report, trace_strength, TraceEntry, TraceReport, TRACE_GRID_POINTS};
pub use vibration::{Drive, VibrationConfig, DEFAULT_FREQUENCIES};

use alloc::string::String;

use crate::beam::BeamError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid vibration table: {0}")]
    InvalidVibration(String),
    #[error("vibration table drives `{0}`, which is not a mirror of the network")]
    UnknownMirror(String),
    #[error("series has {got} samples, expected duration x sample_rate = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Beam(#[from] BeamError),
    #[error("post-selection impossible: zero overlap")]
    ZeroOverlap,
    #[error("non-finite `{0}`")]
    NonFinite(&'static str),
}
