//! Complex error function.

use crate::C64;

const TWO_OVER_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `erf(z)` for complex `z`.
///
/// Power series near the imaginary axis, continued fraction for `erfc` when
/// `|Re z| >= 2`. Relative accuracy is around 1e-13 wherever the result is finite.
pub fn erf(z: C64) -> C64 {
    if z.im == 0.0 {
        return C64::new(libm::erf(z.re), 0.0);
    }
    if z.re.abs() < 2.0 {
        series(z)
    } else if z.re > 0.0 {
        C64::new(1.0, 0.0) - erfc_fraction(z)
    } else {
        erfc_fraction(-z) - 1.0
    }
}

fn series(z: C64) -> C64 {
    // erf(z) = 2/√π Σ (-1)^n z^(2n+1) / (n! (2n+1))
    let z2 = z * z;
    let mut power = z;
    let mut sum = z;
    for n in 1..4000 {
        power *= -z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * TWO_OVER_SQRT_PI
}

fn erfc_fraction(z: C64) -> C64 {
    // erfc(z) = e^{-z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), Re z > 0
    let mut f = z;
    for n in (1..=300).rev() {
        f = z + (n as f64 * 0.5) / f;
    }
    (-z * z).exp() / (SQRT_PI * f)
}
