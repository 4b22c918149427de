//! Dense per-frame landing candidates.
//!
//! A pixel becomes a candidate when its decision score clears the threshold
//! and its raw flatness (distance to the nearest depth edge, in pixels) is at
//! least the UAV footprint radius projected at that pixel's depth.

use serde::{Deserialize, Serialize};

use crate::costmaps::{Costmap, FusionWeights};
use crate::error::Result;
use crate::geometry::{pixel_to_world, project_uav_radius, DepthFrame, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSite {
    pub frame_id: u64,
    pub px: usize,
    pub py: usize,
    pub depth_m: f64,
    pub score: f64,
    pub flat_radius_px: f64,
}

/// World-frame landing site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandingSite {
    #[serde(with = "vec3_xyz")]
    pub position: Vec3,
    pub score: f64,
    pub frame_id: u64,
    pub timestamp: f64,
}

/// Footprint filter parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Footprint {
    pub uav_radius: f64,
    pub safety_factor: f64,
}

/// Every valid pixel with `J ≥ τ` and `flat ≥ safety · r_px(depth)`, in
/// row-major order.
pub fn dense_candidates(
    decision: &Costmap,
    flat_raw: &Costmap,
    frame: &DepthFrame,
    weights: &FusionWeights,
    footprint: Footprint,
) -> Result<Vec<CandidateSite>> {
    let shape = frame.shape();
    decision.values.ensure_shape(shape)?;
    flat_raw.values.ensure_shape(shape)?;

    let mut out = Vec::new();
    for y in 0..shape.1 {
        for x in 0..shape.0 {
            if !frame.is_valid(x, y) {
                continue;
            }
            let (Some(score), Some(flat)) = (decision.value(x, y), flat_raw.value(x, y)) else {
                continue;
            };
            if score < weights.decision_threshold {
                continue;
            }
            let depth = frame.depth.at(x, y);
            let needed = footprint.safety_factor
                * project_uav_radius(footprint.uav_radius, depth, &frame.intrinsics)?;
            if flat < needed {
                continue;
            }
            out.push(CandidateSite {
                frame_id: frame.frame_id,
                px: x,
                py: y,
                depth_m: depth,
                score,
                flat_radius_px: flat,
            });
        }
    }
    Ok(out)
}

/// World positions of candidates. Candidates on invalid pixels are dropped
/// and counted in the second return value.
pub fn candidates_to_world(cands: &[CandidateSite], frame: &DepthFrame) -> (Vec<LandingSite>, usize) {
    let mut skipped = 0;
    let mut sites = Vec::with_capacity(cands.len());
    for c in cands {
        match pixel_to_world(c.px, c.py, frame) {
            Ok(position) => sites.push(LandingSite {
                position,
                score: c.score,
                frame_id: c.frame_id,
                timestamp: frame.timestamp,
            }),
            Err(e) => {
                log::warn!("frame {}: skipping candidate: {e}", frame.frame_id);
                skipped += 1;
            }
        }
    }
    (sites, skipped)
}

pub(crate) mod vec3_xyz {
    use super::Vec3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Xyz {
        x: f64,
        y: f64,
        z: f64,
    }

    pub fn serialize<S: Serializer>(v: &Vec3, s: S) -> Result<S::Ok, S::Error> {
        Xyz {
            x: v.x,
            y: v.y,
            z: v.z,
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec3, D::Error> {
        let p = Xyz::deserialize(d)?;
        Ok(Vec3::new(p.x, p.y, p.z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costmaps::CostmapKind;
    use crate::geometry::{CameraIntrinsics, DepthRange, Pose};
    use crate::Grid;

    fn setup(j: f64) -> (Costmap, Costmap, DepthFrame, FusionWeights) {
        let k = CameraIntrinsics::new(300.0, 300.0, 2.0, 2.0, 5, 5).unwrap();
        let frame = DepthFrame::new(Grid::filled(5, 5, 4.0), k, Pose::identity(), 7, 1.5, DepthRange::default()).unwrap();
        let decision = Costmap::new(Grid::filled(5, 5, j), Grid::filled(5, 5, true), CostmapKind::Decision).unwrap();
        // r_px at 4 m = 300 * 0.13 / 4 = 9.75
        let flat = Costmap::new(Grid::filled(5, 5, 10.0), Grid::filled(5, 5, true), CostmapKind::Flatness).unwrap();
        let w = FusionWeights {
            c1: 0.05,
            c2: 0.4,
            c3: 0.4,
            c4: 0.15,
            decision_threshold: 0.72,
            theta_th: 15f64.to_radians(),
        };
        (decision, flat, frame, w)
    }

    const FOOTPRINT: Footprint = Footprint {
        uav_radius: 0.13,
        safety_factor: 1.0,
    };

    #[test]
    fn threshold_boundary() {
        let (j, f, frame, w) = setup(0.73);
        assert_eq!(dense_candidates(&j, &f, &frame, &w, FOOTPRINT).unwrap().len(), 25);
        let (j, f, frame, w) = setup(0.71);
        assert!(dense_candidates(&j, &f, &frame, &w, FOOTPRINT).unwrap().is_empty());
    }

    #[test]
    fn footprint_filter() {
        let (j, f, frame, w) = setup(0.9);
        let big = Footprint {
            uav_radius: 0.13,
            safety_factor: 1.1,
        };
        assert!(dense_candidates(&j, &f, &frame, &w, big).unwrap().is_empty());
    }

    #[test]
    fn misaligned_grids_error() {
        let (_, f, frame, w) = setup(0.9);
        let j = Costmap::new(Grid::filled(4, 5, 1.0), Grid::filled(4, 5, true), CostmapKind::Decision).unwrap();
        assert!(dense_candidates(&j, &f, &frame, &w, FOOTPRINT).is_err());
    }

    #[test]
    fn to_world() {
        let (j, f, frame, w) = setup(0.9);
        let c = dense_candidates(&j, &f, &frame, &w, FOOTPRINT).unwrap();
        let (sites, skipped) = candidates_to_world(&c, &frame);
        assert_eq!((sites.len(), skipped), (25, 0));
        let center = sites.iter().find(|s| s.position.x == 0.0 && s.position.y == 0.0).unwrap();
        assert_eq!(center.position, Vec3::new(0.0, 0.0, 4.0));
        assert_eq!(center.frame_id, 7);
        assert_eq!(center.timestamp, 1.5);
        assert_eq!(center.score, 0.9);

        let mut bad = c[0].clone();
        bad.px = 99;
        let (sites, skipped) = candidates_to_world(&[bad], &frame);
        assert!(sites.is_empty());
        assert_eq!(skipped, 1);
    }
}
