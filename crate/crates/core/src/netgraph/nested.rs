use alloc::collections::BTreeMap;
use alloc::string::String;

use core::f64::consts::FRAC_PI_2;
use num_traits::Float;

use super::network::Network;

/// Mirror tags of the nested interferometer, inner arm first.
pub const NESTED_MIRRORS: [&str; 5] = ["A", "B", "C", "E", "F"];

/// Five-mirror nested Mach-Zehnder interferometer.
///
/// Layout (segments in lower case, mirror output segments carry the tag):
///
/// ```text
/// s0 -BS1-+- e -[E]- E -BS2-+- a -[A]- A -+
///         |                 +- b -[B]- B -+-BS3-+- f -[F]- F -+
///         |                                     +- dump1      +-BS4-+- det
///         +- c -[C]- C ----------------------------------------+     +- dump2
/// ```
///
/// BS1 sends 2/3 of the power to the inner arm, BS2/BS3 are balanced and BS4
/// reflects 2/3 of the inner arm toward the detector. Trim plates on `c` and
/// `f` fix the splitter phases so the forward amplitudes on `(A, B, C)` are
/// `(1, i, e^{i·phi_c})/√3` and the backward ones `(1, i, 1)/√3`. The inner
/// interferometer is dark toward `f`; `imbalance` is an extra phase on `b`
/// that breaks the darkness.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NestedMzi {
    pub phi_c: f64,
    pub imbalance: f64,
    /// Distance of each mirror from the beam waist; missing tags sit at the waist.
    pub z: BTreeMap<String, f64>,
}

impl NestedMzi {
    pub fn new(phi_c: f64) -> Self {
        Self { phi_c, ..Self::default() }
    }

    pub fn with_imbalance(mut self, delta: f64) -> Self {
        self.imbalance = delta;
        self
    }

    pub fn with_offsets(mut self, z: BTreeMap<String, f64>) -> Self {
        self.z = z;
        self
    }

    fn z_of(&self, tag: &str) -> f64 {
        self.z.get(tag).copied().unwrap_or(0.0)
    }

    pub fn build(&self) -> Network {
        let outer = (2.0f64 / 3.0).sqrt();
        let balanced = 0.5f64.sqrt();
        let last = (1.0f64 / 3.0).sqrt();
        Network::builder()
            .source("s0")
            .splitter("BS1", &["s0"], "e", "c", outer)
            .mirror("E", "e", "E", self.z_of("E"))
            .splitter("BS2", &["E"], "a", "b", balanced)
            .phase("delta", "b", self.imbalance)
            .mirror("A", "a", "A", self.z_of("A"))
            .mirror("B", "b", "B", self.z_of("B"))
            .splitter("BS3", &["A", "B"], "f", "dump1", balanced)
            .phase("trim_f", "f", -FRAC_PI_2)
            .mirror("F", "f", "F", self.z_of("F"))
            .phase("trim_c", "c", -FRAC_PI_2)
            .phase("phi_c", "c", self.phi_c)
            .mirror("C", "c", "C", self.z_of("C"))
            .splitter("BS4", &["F", "C"], "dump2", "det", last)
            .detector("det")
            .dump("dump1")
            .dump("dump2")
            .build()
            .expect("nested interferometer layout is valid for finite parameters")
    }
}

/// Nested interferometer with phase `phi_c` on the outer arm and per-mirror waist distances.
pub fn build_nested_mzi(phi_c: f64, z_offsets: &BTreeMap<String, f64>) -> Network {
    NestedMzi::new(phi_c).with_offsets(z_offsets.clone()).build()
}
