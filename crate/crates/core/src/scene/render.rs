use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::primitives::SceneSpec;
use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, DepthFrame, DepthRange, Pose, Vec3};
use crate::grid::Grid;

/// Steepest slope (degrees) at which a safe-pad surface counts as landable
/// in the ground-truth mask.
pub const SAFE_SLOPE_DEG: f64 = 15.0;

/// Exact per-pixel scene facts for a rendered frame.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    /// World-frame unit normal of the hit surface, facing the camera; zero on miss.
    pub normals: Grid<Vec3>,
    /// Index into `SceneSpec::primitives`, or -1 on miss.
    pub primitive_id: Grid<i32>,
    /// Valid pixels on a safe-pad primitive no steeper than [`SAFE_SLOPE_DEG`].
    pub safe: Grid<bool>,
    /// Noise-free z-depth of the hit (meters), `f64::INFINITY` on miss.
    pub clean_depth: Grid<f64>,
}

impl GroundTruth {
    /// Pixels whose primitive id is in `ids`.
    pub fn mask_of(&self, ids: &[usize]) -> Grid<bool> {
        self.primitive_id
            .map(|&id| id >= 0 && ids.contains(&(id as usize)))
    }

    /// Pixels at a depth discontinuity: some 4-neighbor belongs to another
    /// primitive or is a miss, and the clean depths differ by more than
    /// `jump_m`. Both sides of the boundary are marked.
    pub fn edge_mask(&self, jump_m: f64) -> Grid<bool> {
        let (w, h) = self.primitive_id.shape();
        Grid::from_fn(w, h, |x, y| {
            let id = self.primitive_id.at(x, y);
            let d = self.clean_depth.at(x, y);
            let (xi, yi) = (x as isize, y as isize);
            [(-1, 0), (1, 0), (0, -1), (0, 1)].iter().any(|&(dx, dy)| {
                match self.primitive_id.get_signed(xi + dx, yi + dy) {
                    None => false,
                    Some(&nid) => {
                        let nd = self.clean_depth.at((xi + dx) as usize, (yi + dy) as usize);
                        (nid != id || id < 0) && !((nd - d).abs() <= jump_m)
                    }
                }
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct Rendered {
    pub frame: DepthFrame,
    pub truth: GroundTruth,
}

/// Ray-casts the scene from `pose`. Depth outside `range` (after noise) is
/// invalid. Noise draws come from `(seed, frame_id)` in row-major order.
pub fn render_depth(
    scene: &SceneSpec,
    intrinsics: &CameraIntrinsics,
    pose: &Pose,
    frame_id: u64,
    timestamp: f64,
    range: DepthRange,
) -> Result<Rendered> {
    scene.validate()?;
    intrinsics.validate()?;
    let origin = *pose.translation();
    if let Some(p) = scene.primitives.iter().find(|p| p.shape.contains(&origin)) {
        return Err(Error::config(format!(
            "camera at {origin:?} is inside primitive {:?}",
            p.shape
        )));
    }

    let (w, h) = intrinsics.shape();
    let cos_safe = SAFE_SLOPE_DEG.to_radians().cos();
    let mut depth = Grid::filled(w, h, 0.0);
    let mut clean_depth = Grid::filled(w, h, f64::INFINITY);
    let mut normals = Grid::filled(w, h, Vec3::zeros());
    let mut primitive_id = Grid::filled(w, h, -1i32);
    let mut safe = Grid::filled(w, h, false);

    for y in 0..h {
        for x in 0..w {
            let dir = pose.rotate(&intrinsics.ray(x as f64, y as f64));
            let mut best: Option<(usize, f64, Vec3)> = None;
            for (i, prim) in scene.primitives.iter().enumerate() {
                if let Some(hit) = prim.shape.intersect(&origin, &dir) {
                    if best.is_none_or(|(_, t, _)| hit.t < t) {
                        best = Some((i, hit.t, hit.normal));
                    }
                }
            }
            if let Some((i, t, n)) = best {
                // Ray has unit camera-z, so the ray parameter is the z-depth.
                let n = if n.dot(&dir) > 0.0 { -n } else { n };
                depth.set(x, y, t);
                clean_depth.set(x, y, t);
                normals.set(x, y, n);
                primitive_id.set(x, y, i as i32);
                safe.set(x, y, scene.primitives[i].safe_pad && n.z >= cos_safe);
            }
        }
    }

    if scene.noise_sigma_m > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(scene.seed);
        rng.set_stream(frame_id);
        let noise = Normal::new(0.0, scene.noise_sigma_m)
            .map_err(|e| Error::config(format!("noise: {e}")))?;
        for d in depth.as_mut_slice() {
            let n = noise.sample(&mut rng);
            if d.is_finite() && *d > 0.0 {
                *d += n;
            }
        }
    }

    let frame = DepthFrame::new(depth, *intrinsics, *pose, frame_id, timestamp, range)?;
    for (s, &ok) in safe.as_mut_slice().iter_mut().zip(frame.valid.as_slice()) {
        *s &= ok;
    }
    Ok(Rendered {
        frame,
        truth: GroundTruth {
            normals,
            primitive_id,
            safe,
            clean_depth,
        },
    })
}
