use super::{Costmap, CostmapKind};
use crate::geometry::DepthFrame;

/// Depth-confidence score `−D(p)²`: axial stereo noise grows with the square
/// of depth, so nearer readings are trusted more.
pub fn depth_confidence_map(frame: &DepthFrame) -> Costmap {
    let values = frame
        .depth
        .as_slice()
        .iter()
        .zip(frame.valid.as_slice())
        .map(|(&d, &ok)| if ok { -(d * d) } else { 0.0 });
    Costmap {
        values: crate::Grid::from_vec(frame.width(), frame.height(), values.collect())
            .expect("shape preserved"),
        valid: frame.valid.clone(),
        kind: CostmapKind::DepthConfidence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CameraIntrinsics, DepthRange, Pose};
    use crate::Grid;

    #[test]
    fn squares_depth() {
        let k = CameraIntrinsics::centered(100.0, 3, 1).unwrap();
        let depth = Grid::from_vec(3, 1, vec![2.0, 0.05, 0.0]).unwrap();
        let frame = DepthFrame::new(depth, k, Pose::identity(), 0, 0.0, DepthRange::default()).unwrap();
        let map = depth_confidence_map(&frame);
        assert_eq!(map.value(0, 0), Some(-4.0));
        assert!((map.value(1, 0).unwrap() + 0.0025).abs() < 1e-15);
        assert_eq!(map.value(2, 0), None);
    }
}
