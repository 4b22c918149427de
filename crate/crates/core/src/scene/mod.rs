//! Analytic scene renderer with exact ground truth.
//!
//! Scenes are lists of planes, oriented boxes and spheres in a z-up world.
//! Rendering ray-casts every pixel of a pinhole camera, so depth, surface
//! normal and primitive id are known exactly for each pixel.

mod canonical;
mod primitives;
mod render;

pub use canonical::{
    canonical_scene, canonical_scenes, CameraRig, CanonicalScene, DEFAULT_RUBBLE_SEED,
    FRAME_PERIOD_S, SCENE_NAMES,
};
pub use primitives::{Primitive, SceneSpec, Shape};
pub use render::{render_depth, GroundTruth, Rendered, SAFE_SLOPE_DEG};
