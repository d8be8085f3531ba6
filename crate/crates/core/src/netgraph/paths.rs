use alloc::string::String;
use alloc::vec::Vec;

use super::network::{ElementKind, Network, SegmentId};
use crate::C64;

/// Mirror encountered along a path.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorHit {
    pub tag: String,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub segments: Vec<SegmentId>,
    /// Ordered product of couplings and plates along the path.
    pub coefficient: C64,
    pub mirrors: Vec<MirrorHit>,
}

impl Path {
    pub fn crosses(&self, seg: SegmentId) -> bool {
        self.segments.contains(&seg)
    }

    pub fn mirror_tags(&self) -> impl Iterator<Item = &str> {
        self.mirrors.iter().map(|m| m.tag.as_str())
    }
}

/// Every source-to-detector path with its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PathDecomposition {
    pub paths: Vec<Path>,
}

impl PathDecomposition {
    /// Sum of path coefficients; equals the source-to-detector transfer amplitude.
    pub fn total(&self) -> C64 {
        self.paths.iter().fold(C64::new(0.0, 0.0), |acc, p| acc + p.coefficient)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Depth-first enumeration of all source-to-detector paths.
pub fn enumerate_paths(net: &Network) -> PathDecomposition {
    let mut paths = Vec::new();
    let mut stack = Vec::new();
    walk(net, net.source(), C64::new(1.0, 0.0), &mut stack, &mut Vec::new(), &mut paths);
    PathDecomposition { paths }
}

fn walk(
    net: &Network,
    seg: SegmentId,
    coefficient: C64,
    segments: &mut Vec<SegmentId>,
    mirrors: &mut Vec<MirrorHit>,
    out: &mut Vec<Path>,
) {
    segments.push(seg);
    if seg == net.detector() {
        out.push(Path { segments: segments.clone(), coefficient, mirrors: mirrors.clone() });
    } else if let Some(e) = net.segment(seg).consumer {
        let el = &net.elements()[e];
        let port = el.inputs.iter().position(|&s| s == seg).expect("consumer lists its input");
        let hit = match el.kind {
            ElementKind::Mirror { z } => Some(MirrorHit { tag: el.label.clone(), z }),
            _ => None,
        };
        if let Some(h) = hit.clone() {
            mirrors.push(h);
        }
        for (o, &next) in el.outputs.iter().enumerate() {
            let c = net.coupling(e, port, o);
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            walk(net, next, coefficient * c * net.plate(next), segments, mirrors, out);
        }
        if hit.is_some() {
            mirrors.pop();
        }
    }
    segments.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_splitter_has_one_path() {
        let net = Network::builder()
            .source("s0")
            .splitter("B", &["s0"], "a", "b", 0.6)
            .detector("a")
            .dump("b")
            .build()
            .unwrap();
        let paths = enumerate_paths(&net);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths.paths[0].coefficient, C64::new(0.6, 0.0));
    }

    #[test]
    fn zero_coupling_branches_pruned() {
        let net = Network::builder()
            .source("s0")
            .splitter("B", &["s0"], "a", "b", 1.0)
            .mirror("M", "b", "c", 0.0)
            .splitter("J", &["a", "c"], "d", "x", 0.5)
            .detector("d")
            .dump("x")
            .build()
            .unwrap();
        let paths = enumerate_paths(&net);
        assert_eq!(paths.len(), 1);
        assert!(paths.paths[0].mirrors.is_empty());
    }
}
