use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_traits::Float;

use crate::C64;

/// Index of a segment inside its [`Network`].
pub type SegmentId = usize;

const PARAM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NetworkError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("dangling segment `{0}`")]
    DanglingSegment(String),
    #[error("segment `{0}` is produced more than once")]
    MultipleProducers(String),
    #[error("segment `{0}` is consumed more than once")]
    MultipleConsumers(String),
    #[error("splitter magnitude out of range: `{label}` has t={t} (need 0 <= t <= 1)")]
    SplitterOutOfRange { label: String, t: f64 },
    #[error("non-finite parameter on `{0}`")]
    NonFinite(String),
    #[error("network has no source")]
    MissingSource,
    #[error("multiple sources (second is `{0}`)")]
    MultipleSources(String),
    #[error("network has no detector")]
    MissingDetector,
    #[error("multiple detectors (second is `{0}`)")]
    MultipleDetectors(String),
    #[error("segment `{0}` is both a terminal and an element input")]
    TerminalConsumed(String),
    #[error("segment `{0}` is declared terminal twice")]
    DuplicateTerminal(String),
    #[error("network contains a cycle through `{0}`")]
    Cycle(String),
    #[error("unknown segment `{0}`")]
    UnknownSegment(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementKind {
    /// Beam splitter with real transmission magnitude `t`; reflection is `i·sqrt(1-t²)`.
    Splitter { t: f64 },
    /// Phase plate multiplying the amplitude of its segment by `e^{i·phi}`.
    Phase { phi: f64 },
    /// Tagged mirror at axial distance `z` from the beam waist. Unit coupling.
    Mirror { z: f64 },
    /// Unit-coupling pass-through.
    Junction,
}

impl ElementKind {
    fn same_shape(&self, other: &ElementKind) -> bool {
        match (self, other) {
            (ElementKind::Splitter { t: a }, ElementKind::Splitter { t: b }) => close(*a, *b),
            (ElementKind::Phase { phi: a }, ElementKind::Phase { phi: b }) => close(*a, *b),
            (ElementKind::Mirror { z: a }, ElementKind::Mirror { z: b }) => close(*a, *b),
            (ElementKind::Junction, ElementKind::Junction) => true,
            _ => false,
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_TOL * (1.0 + a.abs().max(b.abs()))
}

/// One network element. Phase plates have their segment in `inputs` and no outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub label: String,
    pub kind: ElementKind,
    pub inputs: Vec<SegmentId>,
    pub outputs: Vec<SegmentId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub label: String,
    /// Producing element, `None` for the source.
    pub producer: Option<usize>,
    pub consumer: Option<usize>,
    /// Sum of the phase plates sitting on this segment.
    pub phase: f64,
}

/// Coupling matrix `U[out][in]` of a symmetric splitter.
pub fn splitter_matrix(t: f64) -> [[C64; 2]; 2] {
    let r = (1.0 - t * t).max(0.0).sqrt();
    let tt = C64::new(t, 0.0);
    let ir = C64::new(0.0, r);
    [[tt, ir], [ir, tt]]
}

/// A validated, immutable lossless feed-forward network.
#[derive(Clone, Debug)]
pub struct Network {
    elements: Vec<Element>,
    segments: Vec<Segment>,
    index: BTreeMap<String, SegmentId>,
    source: SegmentId,
    detector: SegmentId,
    dumps: Vec<SegmentId>,
    /// Topological order of the non-phase elements.
    order: Vec<usize>,
}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, id: SegmentId) -> &Segment {
        &self.segments[id]
    }

    pub fn segment_id(&self, label: &str) -> Result<SegmentId, NetworkError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| NetworkError::UnknownSegment(label.to_string()))
    }

    pub fn label(&self, id: SegmentId) -> &str {
        &self.segments[id].label
    }

    pub fn source(&self) -> SegmentId {
        self.source
    }

    pub fn detector(&self) -> SegmentId {
        self.detector
    }

    pub fn dumps(&self) -> &[SegmentId] {
        &self.dumps
    }

    /// Detector followed by the dumps.
    pub fn terminals(&self) -> impl Iterator<Item = SegmentId> + '_ {
        core::iter::once(self.detector).chain(self.dumps.iter().copied())
    }

    /// Non-phase elements in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn element(&self, label: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.label == label)
    }

    /// Mirrors as `(tag, z, input segment, output segment)`.
    pub fn mirrors(&self) -> impl Iterator<Item = (&str, f64, SegmentId, SegmentId)> + '_ {
        self.elements.iter().filter_map(|e| match e.kind {
            ElementKind::Mirror { z } => Some((e.label.as_str(), z, e.inputs[0], e.outputs[0])),
            _ => None,
        })
    }

    pub(crate) fn plate(&self, id: SegmentId) -> C64 {
        let phase = self.segments[id].phase;
        if phase == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            C64::from_polar(1.0, phase)
        }
    }

    /// Amplitude matrix entry from input port `port` to output port `out` of element `e`.
    pub(crate) fn coupling(&self, e: usize, port: usize, out: usize) -> C64 {
        match self.elements[e].kind {
            ElementKind::Splitter { t } => splitter_matrix(t)[out][port],
            ElementKind::Mirror { .. } | ElementKind::Junction => C64::new(1.0, 0.0),
            ElementKind::Phase { .. } => unreachable!("phase plates carry no coupling"),
        }
    }

    /// Amplitude on every segment when unit amplitude leaves `from`.
    ///
    /// Plates on `from` itself are not applied; plates on every reached segment are.
    pub fn amplitudes_from(&self, from: SegmentId) -> Vec<C64> {
        let mut amp = vec![C64::new(0.0, 0.0); self.segments.len()];
        amp[from] = C64::new(1.0, 0.0);
        for &e in &self.order {
            let el = &self.elements[e];
            if el.inputs.iter().all(|&i| amp[i] == C64::new(0.0, 0.0)) {
                continue;
            }
            for (o, &out) in el.outputs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (p, &inp) in el.inputs.iter().enumerate() {
                    acc += self.coupling(e, p, o) * amp[inp];
                }
                amp[out] += acc * self.plate(out);
            }
        }
        amp
    }

    /// Amplitude from every segment to `to` (the adjoint sweep of [`Self::amplitudes_from`]).
    pub fn amplitudes_to(&self, to: SegmentId) -> Vec<C64> {
        let mut amp = vec![C64::new(0.0, 0.0); self.segments.len()];
        amp[to] = C64::new(1.0, 0.0);
        for &e in self.order.iter().rev() {
            let el = &self.elements[e];
            for (p, &inp) in el.inputs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (o, &out) in el.outputs.iter().enumerate() {
                    acc += self.coupling(e, p, o) * self.plate(out) * amp[out];
                }
                amp[inp] += acc;
            }
        }
        amp
    }

    /// Complex amplitude accumulated over every route from `from` to `to`.
    pub fn transfer_amplitude(&self, from: &str, to: &str) -> Result<C64, NetworkError> {
        let a = self.segment_id(from)?;
        let b = self.segment_id(to)?;
        Ok(self.transfer_between(a, b))
    }

    pub fn transfer_between(&self, from: SegmentId, to: SegmentId) -> C64 {
        self.amplitudes_from(from)[to]
    }

    /// Worst deviation of `U†U` from the identity over all splitters.
    pub fn max_unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for el in &self.elements {
            if let ElementKind::Splitter { t } = el.kind {
                let u = splitter_matrix(t);
                for i in 0..2 {
                    for j in 0..2 {
                        let acc: C64 = u.iter().map(|row| row[i].conj() * row[j]).sum();
                        let target = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((acc - target).norm());
                    }
                }
            }
        }
        worst
    }

    /// Structural equality up to renaming of segments. Elements are matched by label.
    pub fn is_isomorphic(&self, other: &Network) -> bool {
        if self.elements.len() != other.elements.len()
            || self.segments.len() != other.segments.len()
            || self.dumps.len() != other.dumps.len()
        {
            return false;
        }
        let mut map: BTreeMap<SegmentId, SegmentId> = BTreeMap::new();
        let mut used: BTreeSet<SegmentId> = BTreeSet::new();
        map.insert(self.source, other.source);
        used.insert(other.source);
        for &e in &self.order {
            let mine = &self.elements[e];
            let Some(theirs) = other.element(&mine.label) else {
                return false;
            };
            if !mine.kind.same_shape(&theirs.kind)
                || mine.inputs.len() != theirs.inputs.len()
                || mine.outputs.len() != theirs.outputs.len()
            {
                return false;
            }
            for (a, b) in mine.inputs.iter().zip(&theirs.inputs) {
                if map.get(a) != Some(b) {
                    return false;
                }
            }
            for (a, b) in mine.outputs.iter().zip(&theirs.outputs) {
                if !used.insert(*b) {
                    return false;
                }
                map.insert(*a, *b);
            }
        }
        for mine in self.elements.iter().filter(|e| matches!(e.kind, ElementKind::Phase { .. })) {
            let Some(theirs) = other.element(&mine.label) else {
                return false;
            };
            if !mine.kind.same_shape(&theirs.kind) || map.get(&mine.inputs[0]) != Some(&theirs.inputs[0]) {
                return false;
            }
        }
        if map.get(&self.detector) != Some(&other.detector) {
            return false;
        }
        let mut theirs: Vec<_> = other.dumps.clone();
        theirs.sort_unstable();
        let mut mapped: Vec<_> = self.dumps.iter().filter_map(|d| map.get(d).copied()).collect();
        mapped.sort_unstable();
        mapped == theirs
    }

    /// Serialize to the `.imz` description language.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let plates_on = |seg: SegmentId, out: &mut String| {
            for el in &self.elements {
                if let ElementKind::Phase { phi } = el.kind {
                    if el.inputs[0] == seg {
                        let _ = writeln!(out, "phase {} {} phi={}", el.label, self.label(seg), phi);
                    }
                }
            }
        };
        let _ = writeln!(out, "source {}", self.label(self.source));
        plates_on(self.source, &mut out);
        for &e in &self.order {
            let el = &self.elements[e];
            let ins: Vec<&str> = el.inputs.iter().map(|&s| self.label(s)).collect();
            let outs: Vec<&str> = el.outputs.iter().map(|&s| self.label(s)).collect();
            match el.kind {
                ElementKind::Splitter { t } => {
                    let _ = writeln!(
                        out,
                        "splitter {} {} -> {} t={}",
                        el.label,
                        ins.join(" "),
                        outs.join(" "),
                        t
                    );
                }
                ElementKind::Mirror { z } => {
                    let _ = writeln!(out, "mirror {} {} -> {} z={}", el.label, ins[0], outs[0], z);
                }
                ElementKind::Junction => {
                    let _ = writeln!(out, "junction {} {} -> {}", el.label, ins[0], outs[0]);
                }
                ElementKind::Phase { .. } => unreachable!(),
            }
            for &o in &el.outputs {
                plates_on(o, &mut out);
            }
        }
        let _ = writeln!(out, "detector {}", self.label(self.detector));
        for &d in &self.dumps {
            let _ = writeln!(out, "dump {}", self.label(d));
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Pending {
    label: String,
    kind: ElementKind,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

/// Incremental network construction; all validation happens in [`NetworkBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    pending: Vec<Pending>,
    sources: Vec<String>,
    detectors: Vec<String>,
    dumps: Vec<String>,
}

impl NetworkBuilder {
    pub fn source(&mut self, seg: &str) -> &mut Self {
        self.sources.push(seg.to_string());
        self
    }

    /// Splitter fed by one or two inputs. The first input transmits to `out_t`.
    pub fn splitter(&mut self, label: &str, inputs: &[&str], out_t: &str, out_r: &str, t: f64) -> &mut Self {
        self.push(label, ElementKind::Splitter { t }, inputs, &[out_t, out_r])
    }

    pub fn phase(&mut self, label: &str, seg: &str, phi: f64) -> &mut Self {
        self.push(label, ElementKind::Phase { phi }, &[seg], &[])
    }

    pub fn mirror(&mut self, tag: &str, input: &str, output: &str, z: f64) -> &mut Self {
        self.push(tag, ElementKind::Mirror { z }, &[input], &[output])
    }

    pub fn junction(&mut self, label: &str, input: &str, output: &str) -> &mut Self {
        self.push(label, ElementKind::Junction, &[input], &[output])
    }

    pub fn detector(&mut self, seg: &str) -> &mut Self {
        self.detectors.push(seg.to_string());
        self
    }

    pub fn dump(&mut self, seg: &str) -> &mut Self {
        self.dumps.push(seg.to_string());
        self
    }

    fn push(&mut self, label: &str, kind: ElementKind, inputs: &[&str], outputs: &[&str]) -> &mut Self {
        self.pending.push(Pending {
            label: label.to_string(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn build(&self) -> Result<Network, NetworkError> {
        let mut labels = BTreeSet::new();
        for p in &self.pending {
            if !labels.insert(p.label.as_str()) {
                return Err(NetworkError::DuplicateLabel(p.label.clone()));
            }
            match p.kind {
                ElementKind::Splitter { t } => {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(NetworkError::SplitterOutOfRange { label: p.label.clone(), t });
                    }
                    if p.inputs.is_empty() || p.inputs.len() > 2 {
                        return Err(NetworkError::DanglingSegment(p.label.clone()));
                    }
                }
                ElementKind::Phase { phi } if !phi.is_finite() => {
                    return Err(NetworkError::NonFinite(p.label.clone()))
                }
                ElementKind::Mirror { z } if !z.is_finite() => {
                    return Err(NetworkError::NonFinite(p.label.clone()))
                }
                _ => {}
            }
        }

        let source_label = match self.sources.as_slice() {
            [] => return Err(NetworkError::MissingSource),
            [s] => s.clone(),
            [_, second, ..] => return Err(NetworkError::MultipleSources(second.clone())),
        };
        let detector_label = match self.detectors.as_slice() {
            [] => return Err(NetworkError::MissingDetector),
            [d] => d.clone(),
            [_, second, ..] => return Err(NetworkError::MultipleDetectors(second.clone())),
        };

        let mut segments: Vec<Segment> = Vec::new();
        let mut index: BTreeMap<String, SegmentId> = BTreeMap::new();
        let mut intern = |label: &str, segments: &mut Vec<Segment>| -> SegmentId {
            if let Some(&id) = index.get(label) {
                return id;
            }
            let id = segments.len();
            segments.push(Segment { label: label.to_string(), producer: None, consumer: None, phase: 0.0 });
            index.insert(label.to_string(), id);
            id
        };

        let source = intern(&source_label, &mut segments);
        let mut elements = Vec::with_capacity(self.pending.len());
        for (e, p) in self.pending.iter().enumerate() {
            if matches!(p.kind, ElementKind::Phase { .. }) {
                elements.push(Element { label: p.label.clone(), kind: p.kind.clone(), inputs: vec![], outputs: vec![] });
                continue;
            }
            let mut inputs = Vec::new();
            for s in &p.inputs {
                let id = intern(s, &mut segments);
                if segments[id].consumer.is_some() {
                    return Err(NetworkError::MultipleConsumers(s.clone()));
                }
                segments[id].consumer = Some(e);
                inputs.push(id);
            }
            let mut outputs = Vec::new();
            for s in &p.outputs {
                let id = intern(s, &mut segments);
                if segments[id].producer.is_some() || id == source {
                    return Err(NetworkError::MultipleProducers(s.clone()));
                }
                segments[id].producer = Some(e);
                outputs.push(id);
            }
            elements.push(Element { label: p.label.clone(), kind: p.kind.clone(), inputs, outputs });
        }

        // Phase plates may only sit on segments that already exist.
        for (e, p) in self.pending.iter().enumerate() {
            if let ElementKind::Phase { phi } = p.kind {
                let seg = &p.inputs[0];
                let id = *index.get(seg.as_str()).ok_or_else(|| NetworkError::DanglingSegment(seg.clone()))?;
                segments[id].phase += phi;
                elements[e].inputs = vec![id];
            }
        }

        let mut terminal = BTreeSet::new();
        let detector = *index
            .get(detector_label.as_str())
            .ok_or_else(|| NetworkError::DanglingSegment(detector_label.clone()))?;
        terminal.insert(detector);
        let mut dumps = Vec::new();
        for d in &self.dumps {
            let id = *index.get(d.as_str()).ok_or_else(|| NetworkError::DanglingSegment(d.clone()))?;
            if !terminal.insert(id) {
                return Err(NetworkError::DuplicateTerminal(d.clone()));
            }
            dumps.push(id);
        }

        for (id, seg) in segments.iter().enumerate() {
            let has_producer = seg.producer.is_some() || id == source;
            if !has_producer {
                return Err(NetworkError::DanglingSegment(seg.label.clone()));
            }
            if terminal.contains(&id) {
                if seg.consumer.is_some() {
                    return Err(NetworkError::TerminalConsumed(seg.label.clone()));
                }
            } else if seg.consumer.is_none() {
                return Err(NetworkError::DanglingSegment(seg.label.clone()));
            }
        }

        // Kahn ordering over non-phase elements.
        let active: Vec<usize> = (0..elements.len())
            .filter(|&e| !matches!(elements[e].kind, ElementKind::Phase { .. }))
            .collect();
        let mut ready = vec![false; segments.len()];
        ready[source] = true;
        let mut placed = vec![false; elements.len()];
        let mut order = Vec::with_capacity(active.len());
        loop {
            let mut progressed = false;
            for &e in &active {
                if !placed[e] && elements[e].inputs.iter().all(|&i| ready[i]) {
                    placed[e] = true;
                    progressed = true;
                    order.push(e);
                    for &o in &elements[e].outputs {
                        ready[o] = true;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        if let Some(&stuck) = active.iter().find(|&&e| !placed[e]) {
            return Err(NetworkError::Cycle(elements[stuck].label.clone()));
        }

        Ok(Network { elements, segments, index, source, detector, dumps, order })
    }
}
