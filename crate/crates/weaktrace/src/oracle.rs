//! Angular-spectrum propagation on a uniform grid, used only to check the
//! closed-form engine.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use weaktrace_core::beam::evaluate_on_grid;
use weaktrace_core::{GaussianBeam, GridField, GridSpec, C64};

pub const ORACLE_POINTS: usize = 4096;
/// Half-width of the oracle window in beam widths at the widest plane.
pub const ORACLE_HALF_WIDTHS: f64 = 12.0;
/// Relative power allowed in the outer spectral band or at the window edges.
pub const ALIASING_TOLERANCE: f64 = 1e-20;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("aliasing risk: {fraction:e} of the power sits in the outer fifth of the spectrum (grid too coarse)")]
    Undersampled { fraction: f64 },
    #[error("aliasing risk: {fraction:e} of the power reaches the window edges after dz = {dz} (grid too narrow)")]
    WindowOverflow { dz: f64, fraction: f64 },
    #[error("grid needs at least 8 samples, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Beam(#[from] weaktrace_core::beam::BeamError),
}

/// Exact discrete angular-spectrum propagation by `dz` (paraxial transfer
/// function `e^{iκ²dz/(2k)}`, matching the `e^{-ikz}` carrier of the closed-form
/// engine). Unitary on the grid.
pub fn grid_propagate(field: &GridField, dz: f64) -> Result<GridField, OracleError> {
    let n = field.samples.len();
    if n < 8 {
        return Err(OracleError::TooSmall(n));
    }
    if dz == 0.0 {
        return Ok(field.clone());
    }
    let k = 2.0 * PI / field.wavelength;
    let mut planner = FftPlanner::new();
    let mut buf = field.samples.clone();
    planner.plan_fft_forward(n).process(&mut buf);

    let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
    let outer: f64 = buf.iter().enumerate().filter(|(j, _)| signed(*j, n).unsigned_abs() > 2 * n / 5).map(|(_, c)| c.norm_sqr()).sum();
    if outer > ALIASING_TOLERANCE * total {
        return Err(OracleError::Undersampled { fraction: outer / total });
    }

    let dkappa = 2.0 * PI / (n as f64 * field.dx);
    for (j, c) in buf.iter_mut().enumerate() {
        let kappa = signed(j, n) as f64 * dkappa;
        *c *= C64::from_polar(1.0, kappa * kappa * dz / (2.0 * k));
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }

    let edge = n / 20;
    let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
    let rim: f64 = buf[..edge].iter().chain(&buf[n - edge..]).map(|c| c.norm_sqr()).sum();
    if rim > ALIASING_TOLERANCE * total {
        return Err(OracleError::WindowOverflow { dz, fraction: rim / total });
    }
    Ok(GridField { samples: buf, z: field.z + dz, ..field.clone() })
}

fn signed(j: usize, n: usize) -> isize {
    if j < n / 2 {
        j as isize
    } else {
        j as isize - n as isize
    }
}

/// Mirror kick `e^{-2ikθx}` applied sample by sample.
pub fn grid_tilt(field: &GridField, theta_m: f64) -> GridField {
    let k = 2.0 * PI / field.wavelength;
    let samples = field
        .samples
        .iter()
        .enumerate()
        .map(|(i, &s)| s * C64::from_polar(1.0, -2.0 * k * theta_m * field.x(i)))
        .collect();
    GridField { samples, ..field.clone() }
}

/// Default oracle window for beams no wider than `max_width` whose centroids
/// stay within `max_offset` of the axis.
pub fn oracle_spec(max_width: f64, max_offset: f64) -> GridSpec {
    GridSpec::centered(ORACLE_POINTS, ORACLE_HALF_WIDTHS * max_width + max_offset)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Tilt(f64),
    Propagate(f64),
}

/// Runs `steps` through both engines and returns the relative L2 distance of
/// the final fields on a shared oracle grid.
pub fn engine_distance(start: &GaussianBeam, steps: &[Step]) -> Result<f64, OracleError> {
    let mut closed = *start;
    let (mut widest, mut offset) = (start.width(), start.x_c.abs());
    for s in steps {
        closed = apply(closed, *s);
        widest = widest.max(closed.width());
        offset = offset.max(closed.x_c.abs());
    }
    let spec = oracle_spec(widest, offset);
    let mut grid = evaluate_on_grid(start, &spec)?;
    for s in steps {
        grid = match *s {
            Step::Tilt(theta) => grid_tilt(&grid, theta),
            Step::Propagate(dz) => grid_propagate(&grid, dz)?,
        };
    }
    Ok(grid.relative_l2(&evaluate_on_grid(&closed, &spec)?))
}

fn apply(beam: GaussianBeam, step: Step) -> GaussianBeam {
    match step {
        Step::Tilt(theta) => beam.apply_tilt(theta),
        Step::Propagate(dz) => beam.propagate(dz),
    }
}
