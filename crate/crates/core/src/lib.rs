//! Exact toolkit for straight-line segment families that use few slopes:
//! construction of probe-carrying families, their intersection graphs, and
//! exact colouring routines with machine-checkable certificates.
//!
//! All geometry is over arbitrary-precision rationals. Floating point only
//! appears in conservative prefilters and in picture output, never in a
//! decision.

#![forbid(unsafe_code)]

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod coloring;
pub mod config;
pub mod construct;
pub mod geom;
pub mod graph;
pub mod instances;
pub mod io;
pub(crate) mod prefilter;

pub use coloring::{
    chromatic_number, color_odd, color_slope_disjoint, interval_color_uncovered, omega_uncovered,
    pillar_adversary, probe_adversary, tfold_chromatic, verify_coloring, AdversaryOutcome,
    ChromaticOutcome, Coloring, Decision, SearchBudget,
};
pub use config::{Configuration, PlacementPolicy, Probe, Violation};
pub use construct::{
    blowup, build_layer_gadget, compute_gamma, construct, estimate_scale, mixed_blowup,
    ConstructError, ConstructionParams, DEFAULT_SEGMENT_BUDGET,
};
pub use geom::{GeomError, Point, Rational, Rect, Segment, Slope};
pub use graph::{Graph, GraphError, IntervalRep};
