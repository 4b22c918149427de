//! Pinhole camera model, rigid poses, and depth frames.
//!
//! Camera frame: `x` right, `y` down, `z` along the optical axis. Pixel
//! coordinates address pixel centers with `(0, 0)` at the top-left. Depth is
//! z-depth (distance along the optical axis), not ray length.

use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

pub type Vec3 = Vector3<f64>;

/// Tolerance on `RᵀR = I` and `det R = 1`.
pub const ROTATION_TOLERANCE: f64 = 1e-9;
/// Quaternions read from files may deviate this much from unit norm
/// before a warning is logged; they are renormalized either way.
pub const QUATERNION_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: usize, height: usize) -> Result<Self> {
        let k = Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        };
        k.validate()?;
        Ok(k)
    }

    /// Principal point at the image center, square pixels.
    pub fn centered(focal: f64, width: usize, height: usize) -> Result<Self> {
        Self::new(
            focal,
            focal,
            (width as f64 - 1.0) / 2.0,
            (height as f64 - 1.0) / 2.0,
            width,
            height,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.fx, self.fy, self.cx, self.cy]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.fx <= 0.0 || self.fy <= 0.0 {
            return Err(Error::config(format!(
                "focal lengths must be positive and finite (fx={}, fy={})",
                self.fx, self.fy
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::config("image size must be non-zero"));
        }
        if !(0.0..self.width as f64).contains(&self.cx)
            || !(0.0..self.height as f64).contains(&self.cy)
        {
            return Err(Error::config(format!(
                "principal point ({}, {}) outside {}x{} image",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Camera-frame point for pixel `(x, y)` at z-depth `depth`.
    #[inline]
    pub fn backproject_pixel(&self, x: f64, y: f64, depth: f64) -> Vec3 {
        Vec3::new(
            depth * (x - self.cx) / self.fx,
            depth * (y - self.cy) / self.fy,
            depth,
        )
    }

    /// Camera-frame ray through pixel `(x, y)` with unit z component.
    #[inline]
    pub fn ray(&self, x: f64, y: f64) -> Vec3 {
        Vec3::new((x - self.cx) / self.fx, (y - self.cy) / self.fy, 1.0)
    }

    /// Pixel coordinates of a camera-frame point; `None` behind the camera.
    pub fn project(&self, p: &Vec3) -> Option<(f64, f64)> {
        if p.z <= 0.0 {
            return None;
        }
        Some((
            self.fx * p.x / p.z + self.cx,
            self.fy * p.y / p.z + self.cy,
        ))
    }
}

/// Rigid transform `p' = R p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl Pose {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        let ortho = (rotation.transpose() * rotation - Matrix3::identity()).amax();
        let det = rotation.determinant();
        if !ortho.is_finite() || ortho > ROTATION_TOLERANCE || (det - 1.0).abs() > ROTATION_TOLERANCE
        {
            return Err(Error::config(format!(
                "rotation is not a proper orthonormal matrix (|RᵀR−I|={ortho:e}, det={det})"
            )));
        }
        if !translation.iter().all(|v| v.is_finite()) {
            return Err(Error::config("translation must be finite"));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    /// Builds a pose from a (possibly slightly unnormalized) quaternion.
    pub fn from_quaternion(qw: f64, qx: f64, qy: f64, qz: f64, t: Vec3) -> Result<Self> {
        let q = nalgebra::Quaternion::new(qw, qx, qy, qz);
        let norm = q.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::config(format!(
                "degenerate quaternion ({qw}, {qx}, {qy}, {qz})"
            )));
        }
        if (norm - 1.0).abs() > QUATERNION_NORM_TOLERANCE {
            log::warn!("quaternion norm {norm} renormalized");
        }
        let unit = UnitQuaternion::from_quaternion(q);
        Self::new(*unit.to_rotation_matrix().matrix(), t)
    }

    /// Pose from roll/pitch/yaw (radians, applied as `Rz(yaw)·Ry(pitch)·Rx(roll)`).
    pub fn from_euler(roll: f64, pitch: f64, yaw: f64, t: Vec3) -> Self {
        Self {
            rotation: *Rotation3::from_euler_angles(roll, pitch, yaw).matrix(),
            translation: t,
        }
    }

    /// Nadir-looking camera at `position`: optical axis along world −z,
    /// image `x` along world +x, image `y` along world −y.
    pub fn nadir(position: Vec3) -> Self {
        Self {
            rotation: Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0),
            translation: position,
        }
    }

    /// Nadir camera tilted by `roll` about its own x-axis and `pitch` about its own y-axis.
    pub fn tilted_nadir(position: Vec3, roll: f64, pitch: f64) -> Self {
        let nadir = Self::nadir(position);
        let tilt = Rotation3::from_euler_angles(roll, pitch, 0.0);
        Self {
            rotation: nadir.rotation * tilt.matrix(),
            translation: position,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_matrix(&self.rotation)
    }

    #[inline]
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    #[inline]
    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Pose) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }
}

/// Inclusive range of depths the sensor reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepthRange {
    pub min: f64,
    pub max: f64,
}

impl Default for DepthRange {
    fn default() -> Self {
        Self {
            min: crate::DEFAULT_D_MIN,
            max: crate::DEFAULT_D_MAX,
        }
    }
}

impl DepthRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max > min && max.is_finite()) {
            return Err(Error::config(format!("invalid depth range [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn contains(&self, d: f64) -> bool {
        d.is_finite() && d >= self.min && d <= self.max
    }
}

#[derive(Clone, Debug)]
pub struct DepthFrame {
    pub depth: Grid<f64>,
    pub valid: Grid<bool>,
    pub intrinsics: CameraIntrinsics,
    pub pose_world_from_camera: Pose,
    pub frame_id: u64,
    pub timestamp: f64,
}

impl DepthFrame {
    /// Wraps a depth raster; pixels outside `range` (or non-finite) are invalid.
    pub fn new(
        depth: Grid<f64>,
        intrinsics: CameraIntrinsics,
        pose_world_from_camera: Pose,
        frame_id: u64,
        timestamp: f64,
        range: DepthRange,
    ) -> Result<Self> {
        intrinsics.validate()?;
        depth.ensure_shape(intrinsics.shape())?;
        let valid = depth.map(|&d| range.contains(d));
        Ok(Self {
            depth,
            valid,
            intrinsics,
            pose_world_from_camera,
            frame_id,
            timestamp,
        })
    }

    pub fn width(&self) -> usize {
        self.depth.width()
    }

    pub fn height(&self) -> usize {
        self.depth.height()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.depth.shape()
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid.at(x, y)
    }

    /// World position of the camera center.
    pub fn camera_position(&self) -> Vec3 {
        *self.pose_world_from_camera.translation()
    }
}

/// Per-pixel 3D points with a validity mask.
#[derive(Clone, Debug)]
pub struct PointGrid {
    pub points: Grid<Vec3>,
    pub valid: Grid<bool>,
}

/// Camera-frame point cloud of a depth frame; invalid pixels yield no point.
pub fn backproject(frame: &DepthFrame) -> PointGrid {
    let k = &frame.intrinsics;
    let points = Grid::from_fn(frame.width(), frame.height(), |x, y| {
        if frame.is_valid(x, y) {
            k.backproject_pixel(x as f64, y as f64, frame.depth.at(x, y))
        } else {
            Vec3::zeros()
        }
    });
    PointGrid {
        points,
        valid: frame.valid.clone(),
    }
}

pub fn transform_points(points: &PointGrid, pose: &Pose) -> PointGrid {
    let mut out = points.points.clone();
    for (p, &ok) in out.as_mut_slice().iter_mut().zip(points.valid.as_slice()) {
        if ok {
            *p = pose.apply(p);
        }
    }
    PointGrid {
        points: out,
        valid: points.valid.clone(),
    }
}

/// Radius in pixels of a disc of `uav_radius` meters seen at z-depth `depth`.
pub fn project_uav_radius(uav_radius: f64, depth: f64, intrinsics: &CameraIntrinsics) -> Result<f64> {
    if !(depth > 0.0) || !depth.is_finite() {
        return Err(Error::InvalidQuery(format!(
            "cannot project footprint at depth {depth}"
        )));
    }
    Ok(intrinsics.fx * uav_radius / depth)
}

/// World-frame point seen at pixel `(x, y)`.
pub fn pixel_to_world(x: usize, y: usize, frame: &DepthFrame) -> Result<Vec3> {
    if x >= frame.width() || y >= frame.height() {
        return Err(Error::InvalidQuery(format!("pixel ({x}, {y}) outside frame")));
    }
    if !frame.is_valid(x, y) {
        return Err(Error::InvalidQuery(format!(
            "pixel ({x}, {y}) has no valid depth"
        )));
    }
    let p = frame
        .intrinsics
        .backproject_pixel(x as f64, y as f64, frame.depth.at(x, y));
    Ok(frame.pose_world_from_camera.apply(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn intr() -> CameraIntrinsics {
        CameraIntrinsics::new(300.0, 300.0, 5.0, 4.0, 11, 9).unwrap()
    }

    fn frame_with(depth: f64, pose: Pose) -> DepthFrame {
        let k = intr();
        DepthFrame::new(
            Grid::filled(k.width, k.height, depth),
            k,
            pose,
            0,
            0.0,
            DepthRange::default(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_intrinsics() {
        assert!(CameraIntrinsics::new(0.0, 1.0, 0.0, 0.0, 2, 2).is_err());
        assert!(CameraIntrinsics::new(1.0, 1.0, 2.0, 0.0, 2, 2).is_err());
        assert!(CameraIntrinsics::new(1.0, 1.0, 0.0, -0.1, 2, 2).is_err());
    }

    #[test]
    fn backprojects_principal_and_oblique_rays() {
        let k = intr();
        assert_eq!(k.backproject_pixel(5.0, 4.0, 2.0), Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(
            k.backproject_pixel(5.0 + 300.0, 4.0, 1.0),
            Vec3::new(1.0, 0.0, 1.0)
        );
    }

    #[test]
    fn invalid_pixels_are_masked() {
        let k = intr();
        let mut depth = Grid::filled(k.width, k.height, 2.0);
        depth.set(1, 1, 0.0);
        depth.set(2, 1, 25.0);
        let frame = DepthFrame::new(depth, k, Pose::identity(), 0, 0.0, DepthRange::default()).unwrap();
        let cloud = backproject(&frame);
        assert!(!cloud.valid.at(1, 1));
        assert!(!cloud.valid.at(2, 1));
        assert!(cloud.valid.at(3, 1));
        assert!(pixel_to_world(1, 1, &frame).is_err());
    }

    #[test]
    fn transforms_points() {
        let frame = frame_with(2.0, Pose::identity());
        let cloud = backproject(&frame);
        let same = transform_points(&cloud, &Pose::identity());
        assert_eq!(same.points, cloud.points);

        let shifted = transform_points(&cloud, &Pose::from_translation(Vec3::new(0.0, 0.0, 5.0)));
        assert_eq!(shifted.points.at(5, 4), Vec3::new(0.0, 0.0, 7.0));

        let yaw = Pose::from_euler(0.0, 0.0, FRAC_PI_2, Vec3::zeros());
        let p = yaw.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert_abs_diff_eq!(p, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-12);
    }

    #[test]
    fn projects_uav_radius() {
        let k = CameraIntrinsics::new(300.0, 300.0, 320.0, 240.0, 640, 480).unwrap();
        assert_abs_diff_eq!(project_uav_radius(0.13, 5.0, &k).unwrap(), 7.8, epsilon = 1e-12);
        assert_abs_diff_eq!(project_uav_radius(0.13, 10.0, &k).unwrap(), 3.9, epsilon = 1e-12);
        assert_abs_diff_eq!(project_uav_radius(0.13, 20.0, &k).unwrap(), 1.95, epsilon = 1e-12);
        assert!(project_uav_radius(0.13, 0.0, &k).is_err());
        assert!(project_uav_radius(0.13, -1.0, &k).is_err());
    }

    #[test]
    fn pixel_to_world_examples() {
        let frame = frame_with(3.0, Pose::identity());
        assert_eq!(pixel_to_world(5, 4, &frame).unwrap(), Vec3::new(0.0, 0.0, 3.0));

        let frame = frame_with(10.0, Pose::nadir(Vec3::new(0.0, 0.0, 10.0)));
        assert_abs_diff_eq!(pixel_to_world(5, 4, &frame).unwrap(), Vec3::zeros(), epsilon = 1e-12);
    }

    #[test]
    fn rejects_improper_rotation() {
        let reflect = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(Pose::new(reflect, Vec3::zeros()).is_err());
        assert!(Pose::new(Matrix3::identity() * 1.001, Vec3::zeros()).is_err());
    }

    #[test]
    fn quaternion_is_normalized_on_load() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pose = Pose::from_quaternion(2.0 * s, 0.0, 0.0, 2.0 * s, Vec3::zeros()).unwrap();
        let p = pose.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert_abs_diff_eq!(p, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-12);
        assert!(Pose::from_quaternion(0.0, 0.0, 0.0, 0.0, Vec3::zeros()).is_err());
    }

    #[test]
    fn nadir_tilt_keeps_axis_for_zero_angles() {
        let a = Pose::nadir(Vec3::new(1.0, 2.0, 3.0));
        let b = Pose::tilted_nadir(Vec3::new(1.0, 2.0, 3.0), 0.0, 0.0);
        assert_abs_diff_eq!(a.rotation(), b.rotation(), epsilon = 1e-15);
        assert!(Pose::new(*b.rotation(), *b.translation()).is_ok());
    }
}
