//! Stratification calculator for almost complex structures on the
//! rational ruled surfaces `S²×S²` and `CP²#-CP²`.
//!
//! - [`homology`]: intersection form, symplectic areas, admissible strata.
//! - [`stable_trees`]: stable-map trees, stability, isotropy, fiber strata.
//! - [`bundles`]: line and rank-2 bundle degree arithmetic.
//! - [`plumbing`]: plumbing graphs, lens space recognition, link pipelines.
//! - [`projective_maps`]: numeric checks of the explicit projective models.
//! - [`report`]: table/JSON reports used by the `ruled-strata` binary.

pub mod bundles;
pub mod homology;
pub mod plumbing;
pub mod projective_maps;
pub mod report;
pub mod stable_trees;

pub use bundles::{LineBundle, Rank2Bundle};
pub use homology::{H2Class, RuledSurface, SymplecticForm};
pub use plumbing::{PlumbingGraph, Space};
pub use projective_maps::ProjPoint;
pub use stable_trees::{FiberDecomposition, StableTree};
