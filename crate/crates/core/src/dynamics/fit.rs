use num_traits::Float;

/// Magnitudes at or below this are treated as numerically zero.
pub const FIT_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("need at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("eps values span {0:.2} decades, need at least 1")]
    NarrowSpan(f64),
    #[error("below measurable floor: magnitude {magnitude:e} at eps {eps:e}")]
    BelowFloor { eps: f64, magnitude: f64 },
    #[error("eps must be positive and finite, got {0}")]
    BadEps(f64),
}

/// Least-squares line through `(ln ε, ln m)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    /// Natural log of the prefactor.
    pub intercept: f64,
    /// RMS of the log residuals.
    pub residual: f64,
    /// Standard error of the exponent.
    pub stderr: f64,
}

pub fn fit_scaling_exponent(samples: &[(f64, f64)]) -> Result<ScalingFit, FitError> {
    if samples.len() < 4 {
        return Err(FitError::TooFewSamples(samples.len()));
    }
    for &(eps, magnitude) in samples {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(FitError::BadEps(eps));
        }
        if !(magnitude.is_finite() && magnitude > FIT_FLOOR) {
            return Err(FitError::BelowFloor { eps, magnitude });
        }
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    let decades = (hi / lo).log10();
    if decades < 1.0 - 1e-9 {
        return Err(FitError::NarrowSpan(decades));
    }
    let n = samples.len() as f64;
    let xs = samples.iter().map(|s| s.0.ln());
    let ys = samples.iter().map(|s| s.1.ln());
    let mx = xs.clone().sum::<f64>() / n;
    let my = ys.clone().sum::<f64>() / n;
    let sxx: f64 = xs.clone().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.clone().zip(ys.clone()).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = xs.zip(ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    Ok(ScalingFit {
        exponent,
        intercept,
        residual: (sse / n).sqrt(),
        stderr: (sse / (n - 2.0) / sxx).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn grid(f: impl Fn(f64) -> f64) -> alloc::vec::Vec<(f64, f64)> {
        (0..6).map(|i| 1e-4 * 10f64.powf(i as f64 * 0.4)).map(|e| (e, f(e))).collect()
    }

    #[test]
    fn exact_power_laws() {
        let one = fit_scaling_exponent(&grid(|e| 3.0 * e)).unwrap();
        assert!((one.exponent - 1.0).abs() < 1e-6);
        assert!((one.intercept - 3f64.ln()).abs() < 1e-9);
        let two = fit_scaling_exponent(&grid(|e| 0.5 * e * e)).unwrap();
        assert!((two.exponent - 2.0).abs() < 1e-6);
        assert!(two.residual < 1e-9);
    }

    #[test]
    fn errors() {
        assert_eq!(fit_scaling_exponent(&[(1.0, 1.0); 3]), Err(FitError::TooFewSamples(3)));
        let narrow = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)];
        assert!(matches!(fit_scaling_exponent(&narrow), Err(FitError::NarrowSpan(_))));
        let floor = grid(|e| if e < 1e-3 { 0.0 } else { e });
        let err = fit_scaling_exponent(&floor).unwrap_err();
        assert!(err.to_string().contains("below measurable floor"));
    }
}
