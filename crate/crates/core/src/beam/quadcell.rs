use core::f64::consts::PI;

use super::{GaussianBeam, GridField};
use crate::special::erf;
use crate::C64;

/// Two-zone split detector output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCellReading {
    /// `∫ sign(x)|ψ|² dx`
    pub difference: f64,
    /// `∫ |ψ|² dx`
    pub total: f64,
    /// `difference / total`, `None` for a dark input.
    pub normalized: Option<f64>,
}

impl QuadCellReading {
    pub fn new(difference: f64, total: f64) -> Self {
        let normalized = if total > 0.0 { Some(difference / total) } else { None };
        Self { difference, total, normalized }
    }

    /// Normalized difference, 0 for a dark input.
    pub fn signal(&self) -> f64 {
        self.normalized.unwrap_or(0.0)
    }
}

/// Midpoint-rule reading of a sampled field.
pub fn quad_cell_grid(field: &GridField) -> QuadCellReading {
    let mut diff = 0.0;
    let mut total = 0.0;
    for (i, s) in field.samples.iter().enumerate() {
        let p = s.norm_sqr();
        let x = field.x(i);
        total += p;
        if x > 0.0 {
            diff += p;
        } else if x < 0.0 {
            diff -= p;
        }
    }
    QuadCellReading::new(diff * field.dx, (total * field.dx).max(0.0))
}

/// Closed-form reading of a superposition of Gaussian beams.
///
/// Every cross term `ψ_i*·ψ_j` is `exp(-a x² + b x + c)`, whose integral is
/// `√(π/a)·e^{b²/4a + c}` and whose signed integral carries an extra
/// `erf(b / 2√a)`.
pub fn quad_cell_beams(beams: &[GaussianBeam]) -> QuadCellReading {
    let terms: alloc::vec::Vec<_> = beams
        .iter()
        .filter(|b| b.amp != C64::new(0.0, 0.0))
        .map(|b| (b.prefactor(), b.exponent()))
        .collect();
    let mut total = C64::new(0.0, 0.0);
    let mut diff = C64::new(0.0, 0.0);
    for (pi, (ai, bi, ci)) in &terms {
        for (pj, (aj, bj, cj)) in &terms {
            let a = ai.conj() + aj;
            let b = bi.conj() + bj;
            let c = ci.conj() + cj;
            let root = a.sqrt();
            let value = pi.conj() * pj * (C64::new(PI, 0.0) / a).sqrt() * (b * b / (a * 4.0) + c).exp();
            total += value;
            diff += value * erf(b / (root * 2.0));
        }
    }
    QuadCellReading::new(diff.re, total.re.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{evaluate_superposition, BeamParams, GridSpec};

    fn params() -> BeamParams {
        BeamParams::default()
    }

    #[test]
    fn centered_beam_reads_zero() {
        let b = GaussianBeam::waist(&params());
        let r = quad_cell_beams(&[b]);
        assert!(r.difference.abs() < 1e-12);
        assert!((r.total - 1.0).abs() < 1e-12);
        assert_eq!(r.normalized, Some(r.difference));
    }

    #[test]
    fn displaced_beam_small_offset() {
        let d = 1e-3;
        let mut b = GaussianBeam::waist(&params());
        b.x_c = d;
        let r = quad_cell_beams(&[b]);
        let expected = d * 2.0 * (2.0 / PI).sqrt() / b.width();
        assert!((r.signal() / expected - 1.0).abs() < 0.01);
        let grid = evaluate_superposition(&[b], &GridSpec::centered(32768, 10.0)).unwrap();
        let g = quad_cell_grid(&grid);
        assert!((g.signal() - r.signal()).abs() < 1e-9, "{g:?} {r:?}");
    }

    #[test]
    fn dark_input_flagged() {
        let b = GaussianBeam::waist(&params());
        let r = quad_cell_beams(&[b, b.with_amp(C64::new(-1.0, 0.0))]);
        assert_eq!(r.normalized, None);
        assert_eq!(quad_cell_beams(&[]).normalized, None);
    }

    #[test]
    fn closed_form_matches_grid_for_superposition() {
        let p = params();
        let a = GaussianBeam::waist(&p).apply_tilt(3e-4).propagate(800.0).with_amp(C64::new(0.6, 0.1));
        let b = GaussianBeam::waist(&p).propagate(300.0).apply_tilt(-2e-4).propagate(500.0).with_amp(C64::new(0.0, 0.7));
        let exact = quad_cell_beams(&[a, b]);
        // midpoint rule converges as dx² across the sign jump at x = 0
        let err = |n: usize| {
            let grid = evaluate_superposition(&[a, b], &GridSpec::centered(n, 12.0)).unwrap();
            let numeric = quad_cell_grid(&grid);
            assert!((exact.total - numeric.total).abs() < 1e-10, "{exact:?} {numeric:?}");
            (exact.difference - numeric.difference).abs()
        };
        let (coarse, fine) = (err(8192), err(32768));
        assert!(fine < 1e-7, "{fine}");
        assert!(coarse / fine > 12.0, "{coarse} {fine}");
    }

    #[test]
    fn parity() {
        let p = params();
        let a = GaussianBeam::waist(&p).apply_tilt(1e-4).propagate(1200.0);
        let grid = evaluate_superposition(&[a], &GridSpec::centered(2048, 12.0)).unwrap();
        let r = quad_cell_grid(&grid);
        let m = quad_cell_grid(&grid.mirrored());
        assert!((r.difference + m.difference).abs() < 1e-14);
        assert!((r.total - m.total).abs() < 1e-14);
    }
}
