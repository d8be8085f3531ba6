//! Forward and backward evolving amplitudes and weak values of path projectors.
//!
//! For a segment `m` the forward amplitude is the source-to-`m` transfer and
//! the backward amplitude the `m`-to-detector transfer, so their product is the
//! sum over all paths through `m`. The weak value of the projector on `m` is
//! that product divided by the source-to-detector overlap.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::netgraph::{enumerate_paths, Network, NetworkError, PathDecomposition, SegmentId};
use crate::C64;

/// Relative overlap below which post-selection is treated as impossible.
pub const ZERO_OVERLAP_RATIO: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TsvfError {
    #[error("invalid cut `{cut}`: {reason}")]
    InvalidCut { cut: String, reason: String },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("post-selection impossible: |overlap| = {magnitude:e} is below the darkness threshold")]
    ZeroOverlap { magnitude: f64 },
    #[error("no mirror tagged `{0}`")]
    UnknownMirror(String),
    #[error("mirror `{0}` lies on no valid cut")]
    NoValidCut(String),
}

/// A set of segments that every source-to-detector path should cross exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub name: String,
    pub segments: BTreeSet<String>,
}

impl Cut {
    pub fn new(segments: &[&str]) -> Self {
        let segments: BTreeSet<String> = segments.iter().map(|s| s.to_string()).collect();
        let name = segments.iter().cloned().collect::<Vec<_>>().join(",");
        Self { name, segments }
    }

    pub fn named(name: &str, segments: &[&str]) -> Self {
        Self { name: name.to_string(), ..Self::new(segments) }
    }
}

/// Outcome of [`validate_cut`]; `diagnostic` explains the first violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCheck {
    pub valid: bool,
    pub diagnostic: Option<String>,
}

fn resolve(net: &Network, cut: &Cut) -> Result<Vec<SegmentId>, String> {
    cut.segments
        .iter()
        .map(|s| net.segment_id(s).map_err(|_| format!("unknown segment `{s}`")))
        .collect()
}

pub fn validate_cut(net: &Network, cut: &Cut) -> CutCheck {
    let ids = match resolve(net, cut) {
        Ok(ids) => ids,
        Err(reason) => return CutCheck { valid: false, diagnostic: Some(reason) },
    };
    check_against_paths(net, &enumerate_paths(net), &ids)
}

fn check_against_paths(net: &Network, paths: &PathDecomposition, ids: &[SegmentId]) -> CutCheck {
    for path in &paths.paths {
        let crossings = ids.iter().filter(|&&s| path.crosses(s)).count();
        if crossings != 1 {
            let route: Vec<&str> = path.segments.iter().map(|&s| net.label(s)).collect();
            return CutCheck {
                valid: false,
                diagnostic: Some(format!("path {} crosses {crossings} cut segments", route.join(" -> "))),
            };
        }
    }
    CutCheck { valid: true, diagnostic: None }
}

fn ensure_valid(net: &Network, cut: &Cut) -> Result<Vec<SegmentId>, TsvfError> {
    let ids = resolve(net, cut).map_err(|reason| TsvfError::InvalidCut { cut: cut.name.clone(), reason })?;
    let check = check_against_paths(net, &enumerate_paths(net), &ids);
    if check.valid {
        Ok(ids)
    } else {
        Err(TsvfError::InvalidCut { cut: cut.name.clone(), reason: check.diagnostic.unwrap_or_default() })
    }
}

fn pick(net: &Network, ids: &[SegmentId], amps: &[C64]) -> BTreeMap<String, C64> {
    ids.iter().map(|&s| (net.label(s).to_string(), amps[s])).collect()
}

pub fn forward_amplitudes(net: &Network, cut: &Cut) -> Result<BTreeMap<String, C64>, TsvfError> {
    let ids = ensure_valid(net, cut)?;
    Ok(pick(net, &ids, &net.amplitudes_from(net.source())))
}

pub fn backward_amplitudes(net: &Network, cut: &Cut) -> Result<BTreeMap<String, C64>, TsvfError> {
    let ids = ensure_valid(net, cut)?;
    Ok(pick(net, &ids, &net.amplitudes_to(net.detector())))
}

/// Forward/backward pair on one cut.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoStateVector {
    pub cut: Cut,
    pub forward: BTreeMap<String, C64>,
    pub backward: BTreeMap<String, C64>,
    /// Source-to-detector transfer amplitude.
    pub overlap: C64,
}

impl TwoStateVector {
    pub fn new(net: &Network, cut: &Cut) -> Result<Self, TsvfError> {
        let ids = ensure_valid(net, cut)?;
        let fwd = net.amplitudes_from(net.source());
        let bwd = net.amplitudes_to(net.detector());
        Ok(Self {
            cut: cut.clone(),
            forward: pick(net, &ids, &fwd),
            backward: pick(net, &ids, &bwd),
            overlap: fwd[net.detector()],
        })
    }

    /// Overlap recomputed from the cut: `Σ forward[m]·backward[m]`.
    pub fn cut_overlap(&self) -> C64 {
        self.forward.iter().map(|(k, f)| f * self.backward[k]).sum()
    }

    /// Weak values of the projectors on each cut segment.
    pub fn weak_values(&self) -> Result<BTreeMap<String, C64>, TsvfError> {
        let scale = self.forward.values().map(|f| f.norm()).fold(0.0, f64::max);
        check_overlap(self.overlap, scale)?;
        Ok(self.forward.iter().map(|(k, f)| (k.clone(), f * self.backward[k] / self.overlap)).collect())
    }
}

fn check_overlap(overlap: C64, scale: f64) -> Result<(), TsvfError> {
    if overlap.norm() < ZERO_OVERLAP_RATIO * scale || overlap.norm() == 0.0 {
        Err(TsvfError::ZeroOverlap { magnitude: overlap.norm() })
    } else {
        Ok(())
    }
}

/// Weak values per mirror, with the overlap and the configuration echo.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakValueReport {
    pub values: BTreeMap<String, C64>,
    pub overlap: C64,
    pub phi_c: Option<f64>,
    pub z_d: Option<f64>,
}

impl WeakValueReport {
    pub fn with_config(mut self, phi_c: Option<f64>, z_d: Option<f64>) -> Self {
        self.phi_c = phi_c;
        self.z_d = z_d;
        self
    }

    pub fn get(&self, tag: &str) -> Option<C64> {
        self.values.get(tag).copied()
    }
}

/// Weak values of the projectors on the given mirrors (each taken on the mirror's
/// output segment). Every mirror must lie on some valid cut.
pub fn weak_values(net: &Network, mirrors: &[&str]) -> Result<WeakValueReport, TsvfError> {
    let fwd = net.amplitudes_from(net.source());
    let bwd = net.amplitudes_to(net.detector());
    let overlap = fwd[net.detector()];
    let scale = fwd.iter().map(|f| f.norm()).fold(0.0, f64::max);
    check_overlap(overlap, scale)?;

    let paths = enumerate_paths(net);
    let mut values = BTreeMap::new();
    for &tag in mirrors {
        let (_, _, _, seg) = net
            .mirrors()
            .find(|(t, ..)| *t == tag)
            .ok_or_else(|| TsvfError::UnknownMirror(tag.to_string()))?;
        if cut_through(&paths, seg).is_none() {
            return Err(TsvfError::NoValidCut(tag.to_string()));
        }
        values.insert(tag.to_string(), fwd[seg] * bwd[seg] / overlap);
    }
    Ok(WeakValueReport { values, overlap, phi_c: None, z_d: None })
}

/// Weak values for every mirror in the network.
pub fn all_weak_values(net: &Network) -> Result<WeakValueReport, TsvfError> {
    let tags: Vec<String> = net.mirrors().map(|(t, ..)| t.to_string()).collect();
    let refs: Vec<&str> = tags.iter().map(String::as_str).collect();
    weak_values(net, &refs)
}

/// A minimal cut containing `seg`, if one exists.
pub fn cut_through(paths: &PathDecomposition, seg: SegmentId) -> Option<Vec<SegmentId>> {
    let sets: Vec<&[SegmentId]> = paths.paths.iter().map(|p| p.segments.as_slice()).collect();
    let mut counts: Vec<u32> = sets.iter().map(|p| p.contains(&seg) as u32).collect();
    let mut chosen = alloc::vec![seg];
    let mut found = None;
    cover(&sets, &mut counts, &mut chosen, &mut |c| {
        found = Some(c.to_vec());
        false
    });
    found
}

/// All valid cuts built from segments that lie on some path, up to `limit`.
pub fn enumerate_cuts(net: &Network, limit: usize) -> Vec<Cut> {
    let paths = enumerate_paths(net);
    let sets: Vec<&[SegmentId]> = paths.paths.iter().map(|p| p.segments.as_slice()).collect();
    let mut counts = alloc::vec![0u32; sets.len()];
    let mut chosen = Vec::new();
    let mut cuts = Vec::new();
    if sets.is_empty() {
        return cuts;
    }
    cover(&sets, &mut counts, &mut chosen, &mut |c| {
        let labels: Vec<&str> = c.iter().map(|&s| net.label(s)).collect();
        cuts.push(Cut::new(&labels));
        cuts.len() < limit
    });
    cuts
}

/// Exact cover of paths by segments. Returns `false` once `visit` asks to stop.
fn cover(
    sets: &[&[SegmentId]],
    counts: &mut [u32],
    chosen: &mut Vec<SegmentId>,
    visit: &mut dyn FnMut(&[SegmentId]) -> bool,
) -> bool {
    let Some(open) = counts.iter().position(|&c| c == 0) else {
        return visit(chosen);
    };
    for &seg in sets[open] {
        // a segment already crossed by a covered path would cover it twice
        let clash = sets.iter().zip(counts.iter()).any(|(p, &c)| c > 0 && p.contains(&seg));
        if clash {
            continue;
        }
        for (p, c) in sets.iter().zip(counts.iter_mut()) {
            if p.contains(&seg) {
                *c += 1;
            }
        }
        chosen.push(seg);
        let go_on = cover(sets, counts, chosen, visit);
        chosen.pop();
        for (p, c) in sets.iter().zip(counts.iter_mut()) {
            if p.contains(&seg) {
                *c -= 1;
            }
        }
        if !go_on {
            return false;
        }
    }
    true
}
