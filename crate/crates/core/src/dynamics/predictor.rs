use alloc::collections::BTreeMap;
use alloc::string::String;
use core::f64::consts::PI;

use num_traits::Float;

use super::{DynamicsError, VibrationConfig};
use crate::beam::BeamParams;
use crate::tsvf::WeakValueReport;
use crate::C64;

/// First-order signed peak amplitudes of the normalized quad-cell signal:
///
/// `2√(2/π)·k·θ_m·w(z_m)·Im[W_m·e^{i(ζ(z_D) − ζ(z_m))}]`
///
/// for every mirror present in both the weak-value report and the vibration table.
pub fn analytic_first_order(
    wv: &WeakValueReport,
    vib: &VibrationConfig,
    z_d: f64,
    beam: &BeamParams,
    z_offsets: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>, DynamicsError> {
    beam.validate()?;
    if wv.overlap == C64::new(0.0, 0.0) || !wv.overlap.norm().is_finite() {
        return Err(DynamicsError::ZeroOverlap);
    }
    if !z_d.is_finite() {
        return Err(DynamicsError::NonFinite("z_d"));
    }
    let k = beam.k();
    let zeta_d = beam.gouy(z_d);
    let scale = 2.0 * (2.0 / PI).sqrt() * k;
    let mut out = BTreeMap::new();
    for (tag, w) in &wv.values {
        let Some(drive) = vib.drives.get(tag) else {
            continue;
        };
        let z_m = z_offsets.get(tag).copied().unwrap_or(0.0);
        let rotated = w * C64::from_polar(1.0, zeta_d - beam.gouy(z_m));
        out.insert(tag.clone(), scale * drive.amplitude * beam.width_at(z_m) * rotated.im);
    }
    Ok(out)
}
