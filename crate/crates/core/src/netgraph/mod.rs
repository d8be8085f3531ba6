//! Lossless feed-forward interferometer networks.
//!
//! A [`Network`] is a directed acyclic graph whose edges are labeled segments
//! and whose nodes are splitters, mirrors and junctions. Phase plates sit on a
//! segment instead of creating a new one. Amplitudes are propagated with the
//! symmetric splitter convention: transmission `t`, reflection `i·r`,
//! `r = sqrt(1 - t²)`.

mod dsl;
mod nested;
mod network;
mod paths;
mod random;

pub use dsl::{parse_angle, parse_network, ParseError, ParseErrorKind};
pub use nested::{build_nested_mzi, NestedMzi, NESTED_MIRRORS};
pub use network::{
    splitter_matrix, Element, ElementKind, Network, NetworkBuilder, NetworkError, Segment, SegmentId,
};
pub use paths::{enumerate_paths, MirrorHit, Path, PathDecomposition};
pub use random::random_network;
