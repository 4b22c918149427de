//! Safe landing-site detection on rubble from depth frames and camera poses.
//!
//! The crate turns a stream of metric depth frames into scored landing sites:
//!
//! 1. per-frame hazard costmaps (depth confidence, flatness, steepness, energy),
//! 2. a fused decision map,
//! 3. dense per-pixel candidates filtered against the projected UAV footprint,
//! 4. a global world-frame registry backed by a k-d tree, and
//! 5. single-linkage clustering of the registry into a sparse site list.
//!
//! [`scene`] renders analytic scenes with exact ground truth for testing and
//! benchmarking; [`pipeline`] wires the stages together and times them.

pub mod costmaps;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod pipeline;
pub mod registry;
pub mod scene;

pub use error::{Error, Result};
pub use grid::Grid;

/// Closest valid depth reading (meters).
pub const DEFAULT_D_MIN: f64 = 0.05;
/// Farthest valid depth reading (meters).
pub const DEFAULT_D_MAX: f64 = 20.0;
