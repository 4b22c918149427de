//! Named test scenes with a camera trajectory each.
//!
//! | name        | content                                                  |
//! |-------------|----------------------------------------------------------|
//! | FLAT_PAD    | ground with one raised landable pad                      |
//! | STEEP_WALL  | a 25° plane filling the view                             |
//! | TREE        | a clumped sphere canopy over a 30° hillside              |
//! | ROOF_EDGE   | a flat roof beside a 6 m drop                            |
//! | RUBBLE      | seeded tilted debris, a propped 25° slab, a canopy, a pad |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::primitives::{Primitive, SceneSpec, Shape};
use super::render::{render_depth, Rendered};
use crate::error::Result;
use crate::geometry::{CameraIntrinsics, DepthRange, Pose, Vec3};

pub const SCENE_NAMES: [&str; 5] = ["FLAT_PAD", "STEEP_WALL", "TREE", "ROOF_EDGE", "RUBBLE"];

pub const DEFAULT_RUBBLE_SEED: u64 = 7;
pub const DEFAULT_WIDTH: usize = 640;
pub const DEFAULT_HEIGHT: usize = 480;
/// 90° horizontal field of view at 640 px.
pub const DEFAULT_FOCAL_PX: f64 = 320.0;

#[derive(Clone, Debug)]
pub struct CameraRig {
    pub intrinsics: CameraIntrinsics,
    pub poses: Vec<Pose>,
}

#[derive(Clone, Debug)]
pub struct CanonicalScene {
    pub name: &'static str,
    pub spec: SceneSpec,
    pub rig: CameraRig,
}

fn default_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::centered(DEFAULT_FOCAL_PX, DEFAULT_WIDTH, DEFAULT_HEIGHT)
        .expect("default intrinsics are valid")
}

/// Nadir poses along +x at fixed height.
fn sweep(height: f64, xs: &[f64], y: f64) -> Vec<Pose> {
    xs.iter()
        .map(|&x| Pose::nadir(Vec3::new(x, y, height)))
        .collect()
}

fn ground() -> Primitive {
    Primitive::new(Shape::GroundPlane { z: 0.0 }).labeled("ground")
}

fn slope_normal(deg: f64, along_x: bool) -> [f64; 3] {
    let (s, c) = deg.to_radians().sin_cos();
    if along_x {
        [-s, 0.0, c]
    } else {
        [0.0, -s, c]
    }
}

/// Foliage clumps spread over the upper hemisphere of a dome.
fn canopy(center: [f64; 3], dome_radius: f64, clump_radius: f64, clumps: usize) -> Vec<Primitive> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..clumps)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / clumps as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Primitive::new(Shape::Sphere {
                center: [
                    center[0] + dome_radius * r * phi.cos(),
                    center[1] + dome_radius * r * phi.sin(),
                    center[2] + dome_radius * z,
                ],
                radius: clump_radius,
            })
            .labeled("canopy")
        })
        .collect()
}

pub fn flat_pad() -> CanonicalScene {
    let spec = SceneSpec::new(vec![
        ground(),
        Primitive::new(Shape::Box {
            center: [0.0, 0.0, 0.6],
            half_extents: [1.5, 1.5, 0.6],
            rotation_rpy_deg: [0.0; 3],
        })
        .labeled("pad")
        .safe(),
    ]);
    CanonicalScene {
        name: "FLAT_PAD",
        spec,
        rig: CameraRig {
            intrinsics: default_intrinsics(),
            poses: sweep(6.5, &[-0.4, -0.2, 0.0, 0.2, 0.4], 0.0),
        },
    }
}

pub fn steep_wall() -> CanonicalScene {
    let spec = SceneSpec::new(vec![Primitive::new(Shape::TiltedPlane {
        point: [0.0, 0.0, 0.0],
        normal: slope_normal(25.0, true),
    })
    .labeled("wall")]);
    CanonicalScene {
        name: "STEEP_WALL",
        spec,
        rig: CameraRig {
            intrinsics: default_intrinsics(),
            poses: sweep(8.0, &[-0.5, 0.0, 0.5], 0.0),
        },
    }
}

pub fn tree() -> CanonicalScene {
    let mut prims = vec![Primitive::new(Shape::TiltedPlane {
        point: [0.0, 0.0, 0.0],
        normal: slope_normal(30.0, false),
    })
    .labeled("hillside")];
    prims.extend(canopy([0.0, 0.0, 4.0], 2.0, 0.4, 40));
    CanonicalScene {
        name: "TREE",
        spec: SceneSpec::new(prims),
        rig: CameraRig {
            intrinsics: default_intrinsics(),
            poses: sweep(11.0, &[-0.5, 0.0, 0.5], 0.0),
        },
    }
}

pub fn roof_edge() -> CanonicalScene {
    let spec = SceneSpec::new(vec![
        ground(),
        Primitive::new(Shape::Box {
            center: [-6.0, 0.0, 3.0],
            half_extents: [6.0, 8.0, 3.0],
            rotation_rpy_deg: [0.0; 3],
        })
        .labeled("roof"),
    ]);
    CanonicalScene {
        name: "ROOF_EDGE",
        spec,
        rig: CameraRig {
            intrinsics: default_intrinsics(),
            poses: sweep(11.0, &[-1.6, -1.2, -0.8], 0.0),
        },
    }
}

/// Fixed hazards (pad, slab, canopy) plus seeded debris boxes.
pub fn rubble(seed: u64) -> CanonicalScene {
    let mut prims = vec![
        ground(),
        Primitive::new(Shape::Box {
            center: [-5.0, -3.0, 0.5],
            half_extents: [1.3, 1.3, 0.5],
            rotation_rpy_deg: [0.0; 3],
        })
        .labeled("pad")
        .safe(),
        Primitive::new(Shape::Box {
            center: [5.0, 3.0, 1.6],
            half_extents: [1.6, 1.2, 0.2],
            rotation_rpy_deg: [0.0, -25.0, 0.0],
        })
        .labeled("slab"),
    ];
    let canopy_center = [4.0, -4.0, 2.5];
    prims.extend(canopy(canopy_center, 1.5, 0.4, 24));

    let keep_out = [(-5.0, -3.0), (5.0, 3.0), (canopy_center[0], canopy_center[1])];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = 0;
    while placed < 14 {
        let cx: f64 = rng.random_range(-9.0..9.0);
        let cy: f64 = rng.random_range(-7.0..7.0);
        let hx: f64 = rng.random_range(0.3..1.2);
        let hy: f64 = rng.random_range(0.3..1.2);
        let hz: f64 = rng.random_range(0.2..0.8);
        let roll: f64 = rng.random_range(-30.0..30.0);
        let pitch: f64 = rng.random_range(-30.0..30.0);
        let yaw: f64 = rng.random_range(0.0..180.0);
        if keep_out
            .iter()
            .any(|&(kx, ky)| ((cx - kx).powi(2) + (cy - ky).powi(2)).sqrt() < 3.2)
        {
            continue;
        }
        prims.push(
            Primitive::new(Shape::Box {
                center: [cx, cy, 0.8 * hz],
                half_extents: [hx, hy, hz],
                rotation_rpy_deg: [roll, pitch, yaw],
            })
            .labeled("debris"),
        );
        placed += 1;
    }
    let spec = SceneSpec {
        primitives: prims,
        noise_sigma_m: 0.0,
        seed,
    };
    CanonicalScene {
        name: "RUBBLE",
        spec,
        rig: CameraRig {
            intrinsics: default_intrinsics(),
            poses: sweep(10.0, &[-0.5, 0.0, 0.5], 0.0),
        },
    }
}

pub fn canonical_scenes() -> Vec<CanonicalScene> {
    vec![
        flat_pad(),
        steep_wall(),
        tree(),
        roof_edge(),
        rubble(DEFAULT_RUBBLE_SEED),
    ]
}

/// Looks up a canonical scene by name; `seed` only affects RUBBLE.
pub fn canonical_scene(name: &str, seed: u64) -> Option<CanonicalScene> {
    match name.to_ascii_uppercase().as_str() {
        "FLAT_PAD" => Some(flat_pad()),
        "STEEP_WALL" => Some(steep_wall()),
        "TREE" => Some(tree()),
        "ROOF_EDGE" => Some(roof_edge()),
        "RUBBLE" => Some(rubble(seed)),
        _ => None,
    }
}

/// Frame spacing of a rig trajectory.
pub const FRAME_PERIOD_S: f64 = 0.1;

impl CanonicalScene {
    /// Renders every rig pose; frame ids count from 0.
    pub fn render(&self, range: DepthRange) -> Result<Vec<Rendered>> {
        self.rig
            .poses
            .iter()
            .enumerate()
            .map(|(i, pose)| {
                render_depth(
                    &self.spec,
                    &self.rig.intrinsics,
                    pose,
                    i as u64,
                    i as f64 * FRAME_PERIOD_S,
                    range,
                )
            })
            .collect()
    }
}
