use alloc::vec::Vec;

use num_traits::Float;

use super::{BeamError, GaussianBeam, GRID_MIN_HALF_WIDTHS};
use crate::C64;

/// Uniform transverse sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub x0: f64,
    pub dx: f64,
}

impl GridSpec {
    /// `n` midpoints of `[-half_width, half_width]`.
    pub fn centered(n: usize, half_width: f64) -> Self {
        let dx = 2.0 * half_width / n as f64;
        Self { n, x0: -half_width + 0.5 * dx, dx }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Outer edges of the cells.
    pub fn span(&self) -> (f64, f64) {
        (self.x0 - 0.5 * self.dx, self.x0 + (self.n as f64 - 0.5) * self.dx)
    }

    fn check_covers(&self, beam: &GaussianBeam) -> Result<(), BeamError> {
        if self.n < 2 {
            return Err(BeamError::EmptyGrid);
        }
        let (lo, hi) = self.span();
        let reach = GRID_MIN_HALF_WIDTHS * beam.width();
        let (need_lo, need_hi) = (beam.x_c - reach, beam.x_c + reach);
        if need_lo < lo || need_hi > hi {
            return Err(BeamError::GridTooNarrow { lo, hi, need_lo, need_hi });
        }
        Ok(())
    }
}

/// Sampled field on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub samples: Vec<C64>,
    pub dx: f64,
    pub x0: f64,
    pub wavelength: f64,
    pub z: f64,
}

impl GridField {
    pub fn spec(&self) -> GridSpec {
        GridSpec { n: self.samples.len(), x0: self.x0, dx: self.dx }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// `Σ|ψ|²·dx`.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn norm(&self) -> f64 {
        self.power().sqrt()
    }

    /// Relative L2 distance `‖self − other‖ / ‖other‖` over a shared grid.
    pub fn relative_l2(&self, other: &GridField) -> f64 {
        let num: f64 = self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = other.samples.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }

    pub fn mirrored(&self) -> GridField {
        let mut out = self.clone();
        out.samples.reverse();
        out.x0 = -self.x(self.samples.len() - 1);
        out
    }
}

/// Sample a beam's closed-form field.
pub fn evaluate_on_grid(beam: &GaussianBeam, spec: &GridSpec) -> Result<GridField, BeamError> {
    evaluate_superposition(core::slice::from_ref(beam), spec)
}

/// Sample a sum of beams; all must fit the grid and share one axial plane.
pub fn evaluate_superposition(beams: &[GaussianBeam], spec: &GridSpec) -> Result<GridField, BeamError> {
    if spec.n < 2 {
        return Err(BeamError::EmptyGrid);
    }
    for b in beams {
        spec.check_covers(b)?;
    }
    let samples = (0..spec.n)
        .map(|i| {
            let x = spec.x(i);
            beams.iter().fold(C64::new(0.0, 0.0), |acc, b| acc + b.field(x))
        })
        .collect();
    let (wavelength, z) = beams.first().map(|b| (b.wavelength, b.z())).unwrap_or((0.0, 0.0));
    Ok(GridField { samples, dx: spec.dx, x0: spec.x0, wavelength, z })
}
