//! Test-side oracles and scene helpers shared by the integration tests.
#![allow(dead_code)]

use landsite::geometry::{CameraIntrinsics, DepthRange, Pose, Vec3};
use landsite::scene::{render_depth, Primitive, Rendered, SceneSpec, Shape};
use landsite::Grid;

pub fn intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::centered(320.0, 640, 480).unwrap()
}

/// Squared distance from every pixel to the nearest set pixel, where the
/// ring of pixels just outside the image also counts as set. O(N²).
pub fn brute_force_sq_edt(edges: &Grid<bool>) -> Grid<u64> {
    let (w, h) = edges.shape();
    let (wi, hi) = (w as i64, h as i64);
    let mut seeds: Vec<(i64, i64)> = Vec::new();
    for y in -1..=hi {
        for x in -1..=wi {
            let outside = x < 0 || y < 0 || x >= wi || y >= hi;
            if outside || edges.at(x as usize, y as usize) {
                seeds.push((x, y));
            }
        }
    }
    Grid::from_fn(w, h, |x, y| {
        seeds
            .iter()
            .map(|&(sx, sy)| {
                let (dx, dy) = (sx - x as i64, sy - y as i64);
                (dx * dx + dy * dy) as u64
            })
            .min()
            .unwrap()
    })
}

/// An infinite plane through the origin rising `tilt_deg` along world +y.
pub fn tilted_plane(tilt_deg: f64) -> SceneSpec {
    let t = tilt_deg.to_radians();
    SceneSpec::new(vec![Primitive::new(Shape::TiltedPlane {
        point: [0.0, 0.0, 0.0],
        normal: [0.0, -t.sin(), t.cos()],
    })])
}

pub fn render(spec: &SceneSpec, pose: &Pose) -> Rendered {
    render_depth(spec, &intrinsics(), pose, 0, 0.0, DepthRange::default()).unwrap()
}

pub fn nadir_at(x: f64, y: f64, z: f64) -> Pose {
    Pose::nadir(Vec3::new(x, y, z))
}

pub fn angle_deg(a: &Vec3, b: &Vec3) -> f64 {
    (a.dot(b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Slope of a world normal against vertical, in degrees.
pub fn slope_deg(n: &Vec3) -> f64 {
    (n.z.abs() / n.norm()).clamp(0.0, 1.0).acos().to_degrees()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    assert!(!v.is_empty());
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Components of the graph whose edges are the pairs accepted by `linked`,
/// by breadth-first search over all pairs. Each component is sorted; the
/// list is sorted by first member.
pub fn brute_components(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..n {
                if !seen[b] && linked(a, b) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out
}
