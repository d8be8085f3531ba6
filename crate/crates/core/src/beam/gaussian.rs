use core::f64::consts::PI;

use num_traits::Float;

use super::BeamParams;
use crate::C64;

/// Exact state of a Gaussian beam: beam parameter, centroid ray, scalar phase, amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianBeam {
    /// `z + i·z_R`, `z` measured from the waist.
    pub q: C64,
    pub x_c: f64,
    pub theta_c: f64,
    pub phi_acc: f64,
    pub amp: C64,
    pub wavelength: f64,
}

impl GaussianBeam {
    /// Unit-amplitude beam at its waist, on axis.
    pub fn waist(params: &BeamParams) -> Self {
        Self {
            q: C64::new(0.0, params.rayleigh_range()),
            x_c: 0.0,
            theta_c: 0.0,
            phi_acc: 0.0,
            amp: C64::new(1.0, 0.0),
            wavelength: params.wavelength,
        }
    }

    pub fn with_amp(mut self, amp: C64) -> Self {
        self.amp = amp;
        self
    }

    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Axial position relative to the waist.
    pub fn z(&self) -> f64 {
        self.q.re
    }

    pub fn rayleigh_range(&self) -> f64 {
        self.q.im
    }

    /// 1/e² intensity radius.
    pub fn width(&self) -> f64 {
        (2.0 * self.q.norm_sqr() / (self.k() * self.q.im)).sqrt()
    }

    pub fn gouy(&self) -> f64 {
        (self.q.re / self.q.im).atan()
    }

    pub fn propagate(mut self, dz: f64) -> Self {
        if dz == 0.0 {
            return self;
        }
        self.q.re += dz;
        self.x_c += self.theta_c * dz;
        self.phi_acc += 0.5 * self.k() * self.theta_c * self.theta_c * dz;
        self
    }

    /// Propagate to axial position `z`.
    pub fn propagate_to(self, z: f64) -> Self {
        let dz = z - self.q.re;
        self.propagate(dz)
    }

    /// Reflection from a mirror tilted by `theta_m`: the field picks up `e^{-2ik·θ_m·x}`.
    pub fn apply_tilt(mut self, theta_m: f64) -> Self {
        if theta_m == 0.0 {
            return self;
        }
        self.theta_c += 2.0 * theta_m;
        self.phi_acc += 2.0 * self.k() * theta_m * self.x_c;
        self
    }

    /// `N(q) = (k/(π z_R))^{1/4} (i z_R / q)^{1/2}`; unit L² norm for unit amplitude.
    pub fn normalization(&self) -> C64 {
        let zr = self.q.im;
        let scale = (self.k() / (PI * zr)).powf(0.25);
        (C64::new(0.0, zr) / self.q).sqrt() * scale
    }

    /// Exponent coefficients `(α, β, γ)` with `field = amp·N·exp(-α x² + β x + γ)`.
    pub fn exponent(&self) -> (C64, C64, C64) {
        let k = self.k();
        let ik = C64::new(0.0, k);
        let alpha = ik / (self.q * 2.0);
        let beta = ik * self.x_c / self.q - ik * self.theta_c;
        let gamma = -ik * (self.x_c * self.x_c) / (self.q * 2.0) + ik * self.theta_c * self.x_c
            - C64::new(0.0, self.phi_acc);
        (alpha, beta, gamma)
    }

    pub fn prefactor(&self) -> C64 {
        self.amp * self.normalization()
    }

    pub fn field(&self, x: f64) -> C64 {
        let k = self.k();
        let d = x - self.x_c;
        let arg = C64::new(0.0, -1.0)
            * (C64::new(k * d * d, 0.0) / (self.q * 2.0) + k * self.theta_c * d + self.phi_acc);
        self.prefactor() * arg.exp()
    }

    pub fn power(&self) -> f64 {
        self.amp.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beam() -> GaussianBeam {
        GaussianBeam::waist(&BeamParams::default())
    }

    #[test]
    fn waist_profile() {
        let b = beam();
        assert!((b.width() - 1.0).abs() < 1e-12);
        let c = b.field(0.0);
        assert!(c.im.abs() < 1e-15);
        let edge = b.field(1.0).norm() / c.norm();
        assert!((edge - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn width_after_rayleigh_range() {
        let b = beam().propagate(1000.0);
        assert!((b.width() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn on_axis_phase_is_half_gouy() {
        let b = beam();
        for z in [0.0, 300.0, 1000.0, -2500.0] {
            let p = b.propagate(z);
            let phase = p.field(0.0).arg();
            assert!((phase - 0.5 * p.gouy()).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn tilt_and_propagate_identities() {
        let b = beam();
        assert_eq!(b.apply_tilt(0.0), b);
        assert_eq!(b.propagate(0.0), b);
        let once = b.propagate(10.0).apply_tilt(3e-6);
        let twice = b.propagate(10.0).apply_tilt(1e-6).apply_tilt(2e-6);
        assert!((once.theta_c - twice.theta_c).abs() < 1e-20);
        assert!((once.phi_acc - twice.phi_acc).abs() < 1e-15);
        let moved = b.apply_tilt(5e-7).propagate(4000.0);
        assert!((moved.x_c - 2.0 * 5e-7 * 4000.0).abs() < 1e-15);
    }

    #[test]
    fn tilt_multiplies_by_linear_phase() {
        let b = beam().propagate(700.0).apply_tilt(1e-5).propagate(-200.0);
        let t = b.apply_tilt(4e-6);
        for x in [-1.3, 0.0, 0.4, 2.2] {
            let expected = b.field(x) * C64::from_polar(1.0, -2.0 * b.k() * 4e-6 * x);
            assert!((t.field(x) - expected).norm() < 1e-12 * b.field(0.0).norm());
        }
    }

    #[test]
    fn exponent_form_matches_field() {
        let b = beam().apply_tilt(2e-5).propagate(1500.0).with_amp(C64::new(0.3, -0.4));
        let (a, be, g) = b.exponent();
        for x in [-2.0, 0.1, 3.0] {
            let direct = b.field(x);
            let via = b.prefactor() * (-a * x * x + be * x + g).exp();
            assert!((direct - via).norm() < 1e-12);
        }
    }
}
