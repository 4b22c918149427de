use nalgebra::{Matrix3, Rotation3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Rays closer to parallel than this are treated as misses.
const PARALLEL_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    /// Horizontal plane `z = z`; everything below is solid.
    GroundPlane { z: f64 },
    /// Infinite plane through `point`; the side opposite `normal` is solid.
    TiltedPlane { point: [f64; 3], normal: [f64; 3] },
    /// Box with half extents in its own frame, rotated by roll/pitch/yaw
    /// (degrees) about its center.
    Box {
        center: [f64; 3],
        half_extents: [f64; 3],
        #[serde(default)]
        rotation_rpy_deg: [f64; 3],
    },
    Sphere { center: [f64; 3], radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    #[serde(flatten)]
    pub shape: Shape,
    /// Ground-truth landable annotation.
    #[serde(default)]
    pub safe_pad: bool,
    /// Free-form tag used to group primitives in ground-truth queries.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

impl Primitive {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            safe_pad: false,
            label: String::new(),
        }
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn safe(mut self) -> Self {
        self.safe_pad = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub primitives: Vec<Primitive>,
    /// Standard deviation of additive depth noise (meters).
    #[serde(default)]
    pub noise_sigma_m: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SceneSpec {
    pub fn new(primitives: Vec<Primitive>) -> Self {
        Self {
            primitives,
            noise_sigma_m: 0.0,
            seed: 0,
        }
    }

    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Self {
        self.noise_sigma_m = sigma;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.primitives.is_empty() {
            return Err(Error::config("scene needs at least one primitive"));
        }
        if !(self.noise_sigma_m >= 0.0 && self.noise_sigma_m.is_finite()) {
            return Err(Error::config(format!(
                "noise sigma must be >= 0, got {}",
                self.noise_sigma_m
            )));
        }
        for p in &self.primitives {
            p.shape.validate()?;
        }
        Ok(())
    }

    /// Indices of primitives carrying `label`.
    pub fn ids_with_label(&self, label: &str) -> Vec<usize> {
        self.primitives
            .iter()
            .enumerate()
            .filter(|(_, p)| p.label == label)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Ray hit: parameter along the ray and outward unit normal.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Hit {
    pub t: f64,
    pub normal: Vec3,
}

fn v3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

pub(crate) fn box_rotation(rpy_deg: [f64; 3]) -> Matrix3<f64> {
    *Rotation3::from_euler_angles(
        rpy_deg[0].to_radians(),
        rpy_deg[1].to_radians(),
        rpy_deg[2].to_radians(),
    )
    .matrix()
}

impl Shape {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Shape::GroundPlane { z } => z.is_finite(),
            Shape::TiltedPlane { point, normal } => {
                point.iter().all(|v| v.is_finite()) && v3(*normal).norm() > 0.0
            }
            Shape::Box {
                center,
                half_extents,
                rotation_rpy_deg,
            } => {
                center.iter().all(|v| v.is_finite())
                    && half_extents.iter().all(|&h| h > 0.0 && h.is_finite())
                    && rotation_rpy_deg.iter().all(|v| v.is_finite())
            }
            Shape::Sphere { center, radius } => {
                center.iter().all(|v| v.is_finite()) && *radius > 0.0 && radius.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("degenerate primitive {self:?}")))
        }
    }

    /// Whether `p` lies strictly inside the solid.
    pub fn contains(&self, p: &Vec3) -> bool {
        match self {
            Shape::GroundPlane { z } => p.z < *z,
            Shape::TiltedPlane { point, normal } => (p - v3(*point)).dot(&v3(*normal)) < 0.0,
            Shape::Box {
                center,
                half_extents,
                rotation_rpy_deg,
            } => {
                let local = box_rotation(*rotation_rpy_deg).transpose() * (p - v3(*center));
                (0..3).all(|i| local[i].abs() < half_extents[i])
            }
            Shape::Sphere { center, radius } => (p - v3(*center)).norm() < *radius,
        }
    }

    /// First intersection with `t > 0` of `origin + t·dir`.
    pub(crate) fn intersect(&self, origin: &Vec3, dir: &Vec3) -> Option<Hit> {
        match self {
            Shape::GroundPlane { z } => plane_hit(origin, dir, &Vec3::new(0.0, 0.0, *z), &Vec3::z()),
            Shape::TiltedPlane { point, normal } => {
                plane_hit(origin, dir, &v3(*point), &v3(*normal).normalize())
            }
            Shape::Box {
                center,
                half_extents,
                rotation_rpy_deg,
            } => {
                let rot = box_rotation(*rotation_rpy_deg);
                let rt = rot.transpose();
                let o = rt * (origin - v3(*center));
                let d = rt * dir;
                let mut t_near = f64::NEG_INFINITY;
                let mut t_far = f64::INFINITY;
                let mut axis = 0;
                for i in 0..3 {
                    let h = half_extents[i];
                    if d[i].abs() < PARALLEL_EPS {
                        if o[i].abs() > h {
                            return None;
                        }
                        continue;
                    }
                    let a = (-h - o[i]) / d[i];
                    let b = (h - o[i]) / d[i];
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    if lo > t_near {
                        t_near = lo;
                        axis = i;
                    }
                    t_far = t_far.min(hi);
                }
                if t_near > t_far || t_near <= 0.0 {
                    return None;
                }
                let mut local_n = Vec3::zeros();
                local_n[axis] = -d[axis].signum();
                Some(Hit {
                    t: t_near,
                    normal: rot * local_n,
                })
            }
            Shape::Sphere { center, radius } => {
                let c = v3(*center);
                let oc = origin - c;
                let a = dir.dot(dir);
                let b = dir.dot(&oc);
                let k = oc.dot(&oc) - radius * radius;
                let disc = b * b - a * k;
                if disc < 0.0 {
                    return None;
                }
                let t = (-b - disc.sqrt()) / a;
                if t <= 0.0 {
                    return None;
                }
                let p = origin + dir * t;
                Some(Hit {
                    t,
                    normal: (p - c) / *radius,
                })
            }
        }
    }
}

fn plane_hit(origin: &Vec3, dir: &Vec3, point: &Vec3, normal: &Vec3) -> Option<Hit> {
    let den = normal.dot(dir);
    if den.abs() < PARALLEL_EPS {
        return None;
    }
    let t = normal.dot(&(point - origin)) / den;
    if t <= 0.0 {
        return None;
    }
    Some(Hit { t, normal: *normal })
}
