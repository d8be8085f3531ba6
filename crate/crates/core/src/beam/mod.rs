//! Closed-form one-dimensional Gaussian beams.
//!
//! Conventions: carrier `e^{-ikz}`, complex beam parameter `q = z + i·z_R`
//! with the waist at `z = 0`, field
//! `amp·N(q)·exp(-i[k(x-x_c)²/(2q) + k·θ_c·(x-x_c) + φ_acc])`.
//! The on-axis phase of a centered beam advances by `+ζ/2`, where
//! `ζ = arctan(z/z_R)` is the Gouy phase.

mod gaussian;
mod grid;
mod quadcell;

pub use gaussian::GaussianBeam;
pub use grid::{evaluate_on_grid, evaluate_superposition, GridField, GridSpec};
pub use quadcell::{quad_cell_beams, quad_cell_grid, QuadCellReading};

use core::f64::consts::PI;
use num_traits::Float;

/// Half-extent, in beam widths, a grid must cover around the centroid.
pub const GRID_MIN_HALF_WIDTHS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BeamError {
    #[error("Rayleigh range must be positive, got {0}")]
    NonPositiveRayleigh(f64),
    #[error("non-finite beam parameter `{0}`")]
    NonFinite(&'static str),
    #[error("grid too narrow: covers [{lo}, {hi}] but the beam needs [{need_lo}, {need_hi}]")]
    GridTooNarrow { lo: f64, hi: f64, need_lo: f64, need_hi: f64 },
    #[error("grid needs at least 2 samples")]
    EmptyGrid,
}

/// Waist and wavelength of the reference beam.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamParams {
    pub w0: f64,
    pub wavelength: f64,
}

impl Default for BeamParams {
    /// `w0 = 1`, `λ = π·1e-3`: `k = 2000`, `z_R = 1000`.
    fn default() -> Self {
        Self { w0: 1.0, wavelength: PI * 1e-3 }
    }
}

impl BeamParams {
    pub fn validate(&self) -> Result<(), BeamError> {
        if !self.w0.is_finite() || self.w0 <= 0.0 {
            return Err(BeamError::NonFinite("w0"));
        }
        if !self.wavelength.is_finite() || self.wavelength <= 0.0 {
            return Err(BeamError::NonFinite("wavelength"));
        }
        Ok(())
    }

    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.w0 * self.w0 / self.wavelength
    }

    pub fn width_at(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        self.w0 * (1.0 + (z / zr) * (z / zr)).sqrt()
    }

    pub fn gouy(&self, z: f64) -> f64 {
        (z / self.rayleigh_range()).atan()
    }

    /// Distance from the waist at which the Gouy phase equals `zeta` (|zeta| < π/2).
    pub fn z_for_gouy(&self, zeta: f64) -> f64 {
        self.rayleigh_range() * zeta.tan()
    }

    /// Tilt angle for a dimensionless kick strength `ε = k·w0·θ`.
    pub fn theta_for_eps(&self, eps: f64) -> f64 {
        eps / (self.k() * self.w0)
    }
}

/// Gouy phase `arctan(z/z_R)`.
pub fn gouy_phase(z: f64, z_r: f64) -> Result<f64, BeamError> {
    if z_r.is_nan() || z_r <= 0.0 || !z_r.is_finite() {
        return Err(BeamError::NonPositiveRayleigh(z_r));
    }
    if z.is_nan() {
        return Err(BeamError::NonFinite("z"));
    }
    Ok((z / z_r).atan())
}
