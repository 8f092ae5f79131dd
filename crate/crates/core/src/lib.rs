//! Exact geometry on finitely generated metric trees (ℝ-trees): geodesics and
//! medians, isometric embeddings into ℓ1 and ℓ∞, convex subtrees and
//! barycenter sets, covering and packing numbers with Kolmogorov-width
//! brackets, and verifiers for metric inequalities on finite configurations.

pub mod checks;
pub mod compactness;
pub mod convexity;
pub mod embeddings;
pub mod error;
pub mod generators;
pub mod suite;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{MetricTree, Segment, TreePoint, TreeSpec, DEFAULT_TOL};
