//! Simulation core for nested Mach-Zehnder interferometers with vibrating mirrors.
//!
//! The crate is `no_std` (it needs `alloc`) and split by concern:
//!
//! * [`netgraph`]: lossless feed-forward optical networks, the `.imz` description
//!   language, path enumeration and transfer amplitudes.
//! * [`tsvf`]: forward/backward evolving amplitudes at cuts and weak values of
//!   path projectors.
//! * [`beam`]: closed-form Gaussian beam tracking (complex beam parameter,
//!   centroid ray, Gouy phase) and the split-detector readout.
//! * [`dynamics`]: vibrating-mirror time series, exact-bin spectra, the first
//!   order predictor, full-field trace strengths and power-law fits.
//!
//! IO, the grid propagation oracle, scenarios and the command line live in the
//! companion `weaktrace` crate.

#![no_std]
#![deny(unsafe_code)]
// `num_traits::Float` is redundant whenever std is in the crate graph (tests, std dependents)
#![allow(unused_imports)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod beam;
pub mod dynamics;
pub mod netgraph;
pub mod special;
pub mod tsvf;

/// Complex double used for every field and amplitude in the crate.
pub type C64 = num_complex::Complex<f64>;

pub use beam::{gouy_phase, BeamParams, GaussianBeam, GridField, GridSpec, QuadCellReading};
pub use dynamics::{
    analytic_first_order, fit_scaling_exponent, power_spectrum, simulate_timeseries,
    trace_report, trace_strength, Drive, SpectrumReport, TraceReport, VibrationConfig,
};
pub use netgraph::{build_nested_mzi, enumerate_paths, parse_network, NestedMzi, Network};
pub use tsvf::{weak_values, Cut, TwoStateVector, WeakValueReport};
