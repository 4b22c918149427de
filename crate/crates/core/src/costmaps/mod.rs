//! Per-frame hazard costmaps and their fusion into the decision map.
//!
//! | map          | raw value                          | normalized            |
//! |--------------|------------------------------------|-----------------------|
//! | depth conf.  | `−D²`                              | min-max, higher better |
//! | flatness     | distance to nearest depth edge (px) | min-max, higher better |
//! | steepness    | `exp(−θ²/2θ_th²)`                  | never                 |
//! | energy       | camera-to-point distance (m)       | min-max, lower better  |
//!
//! The decision map is the convex combination of the four.

mod canny;
mod confidence;
mod edt;
mod energy;
mod fusion;
mod normalize;
mod normals;
mod steepness;

pub use canny::{canny_edges, CannyThresholds};
pub use confidence::depth_confidence_map;
pub use edt::{distance_transform, squared_distance_transform};
pub use energy::energy_map;
pub use fusion::{decision_map, FusionWeights};
pub use normalize::{minmax_normalize, Orientation};
pub use normals::{surface_normals, NormalMap};
pub use steepness::{slope_angle, steepness_map, steepness_score};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::DepthFrame;
use crate::grid::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostmapKind {
    DepthConfidence,
    Flatness,
    Steepness,
    Energy,
    Decision,
}

impl CostmapKind {
    pub fn name(self) -> &'static str {
        match self {
            CostmapKind::DepthConfidence => "depth_confidence",
            CostmapKind::Flatness => "flatness",
            CostmapKind::Steepness => "steepness",
            CostmapKind::Energy => "energy",
            CostmapKind::Decision => "decision",
        }
    }
}

/// Scalar score per pixel plus validity.
#[derive(Clone, Debug, PartialEq)]
pub struct Costmap {
    pub values: Grid<f64>,
    pub valid: Grid<bool>,
    pub kind: CostmapKind,
}

impl Costmap {
    pub fn new(values: Grid<f64>, valid: Grid<bool>, kind: CostmapKind) -> Result<Self> {
        valid.ensure_shape(values.shape())?;
        Ok(Self {
            values,
            valid,
            kind,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn width(&self) -> usize {
        self.values.width()
    }

    pub fn height(&self) -> usize {
        self.values.height()
    }

    /// Value at `(x, y)` if valid.
    #[inline]
    pub fn value(&self, x: usize, y: usize) -> Option<f64> {
        if self.valid.at(x, y) {
            Some(self.values.at(x, y))
        } else {
            None
        }
    }

    /// `(min, max)` over valid pixels, scanned in row-major order.
    pub fn valid_range(&self) -> Option<(f64, f64)> {
        self.values
            .as_slice()
            .iter()
            .zip(self.valid.as_slice())
            .filter(|(_, &ok)| ok)
            .fold(None, |acc, (&v, _)| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    pub fn valid_count(&self) -> usize {
        self.valid.as_slice().iter().filter(|&&v| v).count()
    }
}

/// Edge raster; `true` marks a depth discontinuity.
pub type BinaryMap = Grid<bool>;

/// Raw (pixel-unit) flatness: the distance transform of the depth edge map.
pub fn flatness_map(frame: &DepthFrame, thresholds: CannyThresholds) -> Result<Costmap> {
    let edges = canny_edges(frame, thresholds)?;
    Ok(flatness_from_edges(frame, &edges))
}

/// Flatness from precomputed edges; validity follows the depth mask.
pub fn flatness_from_edges(frame: &DepthFrame, edges: &BinaryMap) -> Costmap {
    let dist = distance_transform(edges);
    Costmap {
        values: dist.values,
        valid: frame.valid.clone(),
        kind: CostmapKind::Flatness,
    }
}
