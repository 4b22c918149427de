use super::{Costmap, CostmapKind};
use crate::geometry::{pixel_to_world, DepthFrame};
use crate::grid::Grid;

/// Energy cost approximated by the straight-line distance (meters) from the
/// camera to each observed world point.
pub fn energy_map(frame: &DepthFrame) -> Costmap {
    let camera = frame.camera_position();
    let values = Grid::from_fn(frame.width(), frame.height(), |x, y| {
        match pixel_to_world(x, y, frame) {
            Ok(p) => (p - camera).norm(),
            Err(_) => 0.0,
        }
    });
    Costmap {
        values,
        valid: frame.valid.clone(),
        kind: CostmapKind::Energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CameraIntrinsics, DepthRange, Pose, Vec3};

    #[test]
    fn distance_examples() {
        let k = CameraIntrinsics::new(100.0, 100.0, 1.0, 1.0, 3, 3).unwrap();
        let f = DepthFrame::new(
            Grid::filled(3, 3, 5.0),
            k,
            Pose::nadir(Vec3::new(0.0, 0.0, 5.0)),
            0,
            0.0,
            DepthRange::default(),
        )
        .unwrap();
        let e = energy_map(&f);
        assert!((e.values.at(1, 1) - 5.0).abs() < 1e-12);

        // Camera at the origin looking along +x: pixel offsets map to (3, 4, 0).
        let k = CameraIntrinsics::new(1.0, 1.0, 0.0, 0.0, 2, 1).unwrap();
        let d = Grid::from_vec(2, 1, vec![4.0, 4.0]).unwrap();
        let f = DepthFrame::new(d, k, Pose::identity(), 0, 0.0, DepthRange::default()).unwrap();
        let e = energy_map(&f);
        // pixel (1,0) at depth 4 -> (4·1/1, 0, 4); distance sqrt(32)
        assert!((e.values.at(1, 0) - 32f64.sqrt()).abs() < 1e-12);
    }
}
