//! Finite representations of compact sets and upper semi-continuous fuzzy
//! sets on R^m, together with the metrics and convergence diagnostics that
//! make set-valued limit statements checkable at desk scale.
//!
//! Everything is built from two value types: [`geometry::PointCloud`], a
//! finite sample of a compact subset of R^m, and [`fuzzy::LevelFuzzySet`], a
//! step fuzzy set given by finitely many levels with nested point-cloud cuts.
//! On top of those sit
//!
//! - [`geometry`]: Hausdorff distances with the empty-set convention, sampled
//!   connectivity / convexity / star-shapedness predicates and kernels;
//! - [`metrics`]: the endograph metric (exact closed form for step sets), the
//!   sendograph metric, the `d_p` level metrics and the radius-excess
//!   functional;
//! - [`convergence`]: truncated inner/outer set-convergence residuals, level
//!   decompositions and implication verdicts over finite sequence prefixes;
//! - [`compactness`]: boundedness profiles, greedy epsilon-nets under the
//!   endograph metric, level truncation and diagonal limit extraction;
//! - [`families`]: seeded closed-form sequence generators used by the test
//!   and CLI layers.
//!
//! All types are immutable after construction and every operation is pure,
//! so concurrent use needs no synchronization. Batch computations may use
//! internal parallelism but always return order-deterministic results.

pub mod compactness;
pub mod convergence;
pub mod families;
pub mod fuzzy;
pub mod geometry;
pub mod metrics;

pub use fuzzy::LevelFuzzySet;
pub use geometry::{ExtendedDistance, GeometryConfig, PointCloud};
