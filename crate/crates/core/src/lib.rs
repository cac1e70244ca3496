//! Geometric-complexity analysis and evaluation metrics for vectorized roof
//! annotations.
//!
//! - [`geometry`]: polygon rings, area, hull, convexity, compactness, IoU.
//! - [`wireframe`]: planar roof graphs, face extraction, building assembly.
//! - [`complexity`]: per-building features, PCA complexity score,
//!   histograms and complexity-balanced splits.
//! - [`metrics`]: instance matching and the reconstruction scores.

pub mod assignment;
pub mod complexity;
pub mod geometry;
pub mod metrics;
pub mod synth;
pub mod wireframe;

pub use complexity::{ComplexityRecord, PcaModel, SplitManifest};
pub use geometry::{Point2, PolygonRing};
pub use metrics::{EvalConfig, EvalReport, MatchSet};
pub use wireframe::{BuildingInstance, Wireframe};
