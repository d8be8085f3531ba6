use alloc::string::ToString;
use alloc::vec::Vec;

use super::{DynamicsError, VibrationConfig};
use crate::beam::{quad_cell_beams, BeamParams, GaussianBeam, QuadCellReading};
use crate::netgraph::{enumerate_paths, Network};
use crate::C64;

/// One source-to-detector route: coefficient and the mirrors it reflects from.
#[derive(Clone, Debug)]
struct Route {
    coefficient: C64,
    /// `(z, drive tag)` in path order.
    mirrors: Vec<(f64, Option<usize>)>,
}

/// Precomputed paths of a network under a vibration table.
#[derive(Clone, Debug)]
pub struct Simulator {
    routes: Vec<Route>,
    drives: Vec<super::Drive>,
    vib: VibrationConfig,
    beam: BeamParams,
}

impl Simulator {
    pub fn new(net: &Network, vib: &VibrationConfig, beam: &BeamParams) -> Result<Self, DynamicsError> {
        vib.validate()?;
        beam.validate()?;
        let tags: Vec<&str> = vib.drives.keys().map(|t| t.as_str()).collect();
        for tag in &tags {
            if !net.mirrors().any(|(m, ..)| m == *tag) {
                return Err(DynamicsError::UnknownMirror(tag.to_string()));
            }
        }
        let routes = enumerate_paths(net)
            .paths
            .into_iter()
            .map(|p| Route {
                coefficient: p.coefficient,
                mirrors: p.mirrors.iter().map(|m| (m.z, tags.iter().position(|t| *t == m.tag))).collect(),
            })
            .collect();
        Ok(Self { routes, drives: vib.drives.values().copied().collect(), vib: vib.clone(), beam: *beam })
    }

    pub fn vibration(&self) -> &VibrationConfig {
        &self.vib
    }

    pub fn beam(&self) -> &BeamParams {
        &self.beam
    }

    /// Per-path beams at time `t`, propagated to the plane `z_end`.
    pub fn beams_at(&self, t: f64, z_end: f64) -> Vec<GaussianBeam> {
        self.beams_muted(t, z_end, None)
    }

    /// Index of a driven mirror in the vibration table.
    pub fn drive_index(&self, tag: &str) -> Option<usize> {
        self.vib.drives.keys().position(|t| t == tag)
    }

    /// Like [`Self::beams_at`] with drive `muted` held at zero tilt.
    pub fn beams_muted(&self, t: f64, z_end: f64, muted: Option<usize>) -> Vec<GaussianBeam> {
        let tilts: Vec<f64> =
            self.drives.iter().enumerate().map(|(i, d)| if Some(i) == muted { 0.0 } else { d.tilt(t) }).collect();
        self.routes
            .iter()
            .map(|r| {
                let mut b = GaussianBeam::waist(&self.beam).with_amp(r.coefficient);
                for &(z, drive) in &r.mirrors {
                    if let Some(i) = drive {
                        b = b.propagate_to(z).apply_tilt(tilts[i]);
                    }
                }
                b.propagate_to(z_end)
            })
            .collect()
    }

    /// Largest `Σ 2|θ|·|z_end − z|` over the paths; bounds the centroid excursion.
    pub fn centroid_bound(&self, z_end: f64) -> f64 {
        self.routes
            .iter()
            .map(|r| {
                r.mirrors
                    .iter()
                    .filter_map(|&(z, d)| d.map(|i| 2.0 * self.drives[i].amplitude.abs() * (z_end - z).abs()))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn reading(&self, n: usize, z_d: f64) -> QuadCellReading {
        quad_cell_beams(&self.beams_at(self.vib.time(n), z_d))
    }

    pub fn run(&self, z_d: f64) -> Result<Vec<QuadCellReading>, DynamicsError> {
        if !z_d.is_finite() {
            return Err(DynamicsError::NonFinite("z_d"));
        }
        Ok((0..self.vib.n_samples()).map(|n| self.reading(n, z_d)).collect())
    }
}

/// Quad-cell readings at `t = n / sample_rate` for a detector at distance `z_d` from the waist.
pub fn simulate_timeseries(
    net: &Network,
    vib: &VibrationConfig,
    z_d: f64,
    beam: &BeamParams,
) -> Result<Vec<QuadCellReading>, DynamicsError> {
    Simulator::new(net, vib, beam)?.run(z_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::NestedMzi;

    #[test]
    fn undriven_series_is_flat() {
        let p = BeamParams::default();
        let net = NestedMzi::new(0.0).build();
        let vib = VibrationConfig::default_for(0.0, &p);
        let series = simulate_timeseries(&net, &vib, 3000.0, &p).unwrap();
        assert_eq!(series.len(), 512);
        for r in &series {
            assert!(r.difference.abs() < 1e-15);
            assert!((r.total - series[0].total).abs() < 1e-15);
        }
    }

    #[test]
    fn unknown_mirror_rejected() {
        let p = BeamParams::default();
        let net = NestedMzi::new(0.0).build();
        let mut vib = VibrationConfig::default_for(1e-3, &p);
        let d = vib.drives["A"];
        vib.drives.insert("Q".into(), crate::dynamics::Drive { frequency: 7.0, ..d });
        assert_eq!(
            simulate_timeseries(&net, &vib, 0.0, &p).unwrap_err(),
            DynamicsError::UnknownMirror("Q".into())
        );
    }
}
