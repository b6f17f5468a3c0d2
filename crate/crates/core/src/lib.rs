//! Degenerate forest decompositions and anti-rainbow proper edge colourings.
//!
//! The pipeline for a graph `G` with maximum density `m = m(G)`:
//!
//! 1. [`max_density`] computes `m` exactly by parametric maximum flow.
//! 2. [`degenerate_decomposition`] orients `G` along a degeneracy ordering
//!    and peels forests `F_K, ..., F_{k+1}` (`k = ⌊m⌋`, `K = ⌊2m⌋`), each of
//!    maximum degree at most `⌈i / (i - m)⌉`, leaving a `k`-degenerate
//!    residual.
//! 3. [`anti_rainbow_coloring`] gives every forest its own palette and every
//!    residual edge its own colour. For `m >= 18` no rainbow subgraph of
//!    that colouring has 2-density `>= m`.
//!
//! The [`audit`] module checks these guarantees independently, and
//! [`experiments`] runs seeded `G(n, p)` sweeps over the whole pipeline.

pub mod audit;
pub mod coloring;
pub mod decompose;
pub mod density;
pub mod error;
pub mod experiments;
mod flow;
pub mod graph;
pub mod matching;
pub mod orientation;
pub mod rational;
pub mod report;

pub use coloring::{
    anti_rainbow_coloring, anti_rainbow_coloring_with, color_decomposition, color_forest,
    is_proper_coloring, r_value, ColoringDocument, Colour, ColouredEdge, EdgeColoring, LayerTag,
    GUARANTEE_THRESHOLD,
};
pub use decompose::{
    degenerate_decomposition, degenerate_decomposition_with, peel_layer, verify_decomposition,
    DecomposeOptions, Decomposition, HallViolation, PeelResult,
};
pub use density::{
    is_strictly_two_balanced, max_density, max_density_bruteforce, max_two_density,
    strictly_two_balanced_core, subgraph_density, two_density, DensityWitness, TwoDensity,
};
pub use error::{Error, Result};
pub use graph::{is_forest, parse_graph, EdgeId, Graph, VertexId};
pub use matching::{saturating_matching, MatchingOutcome};
pub use orientation::{
    degeneracy_ordering, exact_degeneracy, orient_by_ordering, Arc, DegeneracyOrdering, Orientation,
};
pub use rational::Rational;
pub use report::{CheckEntry, CheckStatus, Report};
