use super::{Costmap, CostmapKind, NormalMap};
use crate::geometry::Vec3;

/// Angle between a unit normal and world up, independent of normal sign.
#[inline]
pub fn slope_angle(normal: &Vec3) -> f64 {
    normal.z.abs().min(1.0).acos()
}

/// `exp(−θ² / (2 θ_th²))`.
#[inline]
pub fn steepness_score(theta: f64, theta_th: f64) -> f64 {
    (-(theta * theta) / (2.0 * theta_th * theta_th)).exp()
}

pub fn steepness_map(normals: &NormalMap, theta_th: f64) -> Costmap {
    let (w, h) = normals.normals.shape();
    let values = crate::Grid::from_fn(w, h, |x, y| {
        if normals.valid.at(x, y) {
            steepness_score(slope_angle(normals.normals.get(x, y)), theta_th)
        } else {
            0.0
        }
    });
    Costmap {
        values,
        valid: normals.valid.clone(),
        kind: CostmapKind::Steepness,
    }
}
