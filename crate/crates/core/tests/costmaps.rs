mod common;

use std::collections::VecDeque;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use landsite::costmaps::{
    canny_edges, decision_map, depth_confidence_map, distance_transform, energy_map, flatness_map,
    minmax_normalize, squared_distance_transform, steepness_map, surface_normals, CannyThresholds,
    Orientation,
};
use landsite::geometry::{CameraIntrinsics, DepthFrame, DepthRange, Pose, Vec3};
use landsite::pipeline::PipelineConfig;
use landsite::scene::canonical_scene;
use landsite::Grid;

/// Straightforward Canny: direct loops, angle bins from atan2, breadth-first
/// hysteresis.
fn naive_canny(depth: &Grid<f64>, valid: &Grid<bool>, low: f64, high: f64) -> Grid<bool> {
    let (w, h) = depth.shape();
    let (wi, hi) = (w as i64, h as i64);
    let g: Vec<f64> = (-3..=3).map(|o: i64| (-((o * o) as f64) / 2.0).exp()).collect();

    // Horizontal then vertical pass over numerator and weight.
    let mut num = vec![0.0; w * h];
    let mut den = vec![0.0; w * h];
    for y in 0..hi {
        for x in 0..wi {
            let mut n = 0.0;
            let mut d = 0.0;
            for o in -3..=3i64 {
                let sx = x + o;
                if sx >= 0 && sx < wi && valid.at(sx as usize, y as usize) {
                    n += g[(o + 3) as usize] * depth.at(sx as usize, y as usize);
                    d += g[(o + 3) as usize];
                }
            }
            num[(y * wi + x) as usize] = n;
            den[(y * wi + x) as usize] = d;
        }
    }
    let mut smooth = vec![0.0; w * h];
    for y in 0..hi {
        for x in 0..wi {
            let mut n = 0.0;
            let mut d = 0.0;
            for o in -3..=3i64 {
                let sy = y + o;
                if sy >= 0 && sy < hi {
                    n += g[(o + 3) as usize] * num[(sy * wi + x) as usize];
                    d += g[(o + 3) as usize] * den[(sy * wi + x) as usize];
                }
            }
            smooth[(y * wi + x) as usize] = if d > 0.0 { n / d } else { 0.0 };
        }
    }

    let s = |x: i64, y: i64| smooth[(y.clamp(0, hi - 1) * wi + x.clamp(0, wi - 1)) as usize];
    let mut mag = vec![0.0; w * h];
    let mut bin = vec![0u8; w * h];
    for y in 0..hi {
        for x in 0..wi {
            let gx = (s(x + 1, y - 1) + 2.0 * s(x + 1, y) + s(x + 1, y + 1)
                - (s(x - 1, y - 1) + 2.0 * s(x - 1, y) + s(x - 1, y + 1)))
                / 8.0;
            let gy = (s(x - 1, y + 1) + 2.0 * s(x, y + 1) + s(x + 1, y + 1)
                - (s(x - 1, y - 1) + 2.0 * s(x, y - 1) + s(x + 1, y - 1)))
                / 8.0;
            let i = (y * wi + x) as usize;
            mag[i] = (gx * gx + gy * gy).sqrt();
            let mut a = gy.atan2(gx).to_degrees();
            if a < 0.0 {
                a += 180.0;
            }
            bin[i] = if !(22.5..157.5).contains(&a) {
                0
            } else if a < 67.5 {
                1
            } else if a < 112.5 {
                2
            } else {
                3
            };
        }
    }

    let m = |x: i64, y: i64| {
        if x < 0 || y < 0 || x >= wi || y >= hi {
            0.0
        } else {
            mag[(y * wi + x) as usize]
        }
    };
    let mut thin = vec![0.0; w * h];
    for y in 0..hi {
        for x in 0..wi {
            let i = (y * wi + x) as usize;
            if mag[i] < low {
                continue;
            }
            let (dx, dy) = [(1, 0), (1, 1), (0, 1), (-1, 1)][bin[i] as usize];
            if mag[i] > m(x - dx, y - dy) && mag[i] >= m(x + dx, y + dy) {
                thin[i] = mag[i];
            }
        }
    }

    let mut out = vec![false; w * h];
    let mut queue: VecDeque<(i64, i64)> = (0..hi)
        .flat_map(|y| (0..wi).map(move |x| (x, y)))
        .filter(|&(x, y)| thin[(y * wi + x) as usize] >= high)
        .collect();
    for &(x, y) in &queue {
        out[(y * wi + x) as usize] = true;
    }
    while let Some((x, y)) = queue.pop_front() {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= wi || ny >= hi {
                    continue;
                }
                let j = (ny * wi + nx) as usize;
                if !out[j] && thin[j] >= low {
                    out[j] = true;
                    queue.push_back((nx, ny));
                }
            }
        }
    }

    for y in 0..hi {
        for x in 0..wi {
            let near_invalid = (-1..=1).any(|dy| {
                (-1..=1).any(|dx| {
                    let (nx, ny) = (x + dx, y + dy);
                    nx >= 0 && ny >= 0 && nx < wi && ny < hi && !valid.at(nx as usize, ny as usize)
                })
            });
            if near_invalid {
                out[(y * wi + x) as usize] = true;
            }
        }
    }
    Grid::from_vec(w, h, out).unwrap()
}

fn frame_from(depth: Grid<f64>) -> DepthFrame {
    let k = CameraIntrinsics::centered(100.0, depth.width(), depth.height()).unwrap();
    DepthFrame::new(depth, k, Pose::identity(), 0, 0.0, DepthRange::default()).unwrap()
}

fn assert_canny_matches(frame: &DepthFrame, t: CannyThresholds) {
    let fast = canny_edges(frame, t).unwrap();
    let slow = naive_canny(&frame.depth, &frame.valid, t.low, t.high);
    let diff = fast
        .as_slice()
        .iter()
        .zip(slow.as_slice())
        .filter(|(a, b)| a != b)
        .count();
    assert_eq!(diff, 0, "{diff} pixels differ");
    assert!(fast.as_slice().iter().any(|&b| b));
}

#[test]
fn canny_matches_naive_on_random_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..8 {
        let (w, h) = (rng.random_range(8..90), rng.random_range(8..70));
        let block = rng.random_range(2..9);
        let levels: Vec<f64> = (0..w * h).map(|_| rng.random_range(0.5..6.0)).collect();
        let depth = Grid::from_fn(w, h, |x, y| {
            if rng.random_bool(0.02) {
                0.0
            } else {
                levels[(y / block) * w + x / block] + rng.random_range(-0.02..0.02)
            }
        });
        assert_canny_matches(&frame_from(depth), CannyThresholds::default());
    }
}

#[test]
fn canny_matches_naive_on_rubble() {
    let mut scene = canonical_scene("RUBBLE", 3).unwrap();
    scene.spec = scene.spec.with_noise(0.01, 3);
    let r = render(&scene.spec, &scene.rig.poses[0]);
    assert_canny_matches(&r.frame, CannyThresholds::default());
    assert_canny_matches(&r.frame, CannyThresholds::new(0.02, 0.1).unwrap());
}

#[test]
fn step_between_half_planes_is_one_chain() {
    let depth = Grid::from_fn(60, 40, |x, _| if x < 30 { 2.0 } else { 5.0 });
    let e = canny_edges(&frame_from(depth), CannyThresholds::default()).unwrap();
    for y in 0..40 {
        let cols: Vec<usize> = (0..60).filter(|&x| e.at(x, y)).collect();
        assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
        assert!(cols[0] == 29 || cols[0] == 30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edt_matches_brute_force(w in 1usize..24, h in 1usize..24, seed: u64, density in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = Grid::from_fn(w, h, |_, _| rng.random_bool(density));
        prop_assert_eq!(squared_distance_transform(&edges), brute_force_sq_edt(&edges));
        let d = distance_transform(&edges);
        for (v, s) in d.values.as_slice().iter().zip(brute_force_sq_edt(&edges).as_slice()) {
            prop_assert_eq!(*v, (*s as f64).sqrt());
        }
    }
}

#[test]
fn uniform_plane_flatness_peaks_at_center() {
    let f = frame_from(Grid::filled(640, 480, 4.0));
    let flat = flatness_map(&f, CannyThresholds::default()).unwrap();
    assert_eq!(flat.valid_range(), Some((1.0, 240.0)));
    assert_eq!(flat.values.at(320, 240), 240.0);
}

#[test]
fn pixel_next_to_step_has_unit_flatness() {
    let depth = Grid::from_fn(80, 60, |x, _| if x < 40 { 2.0 } else { 5.0 });
    let f = frame_from(depth);
    let edges = canny_edges(&f, CannyThresholds::default()).unwrap();
    let flat = flatness_map(&f, CannyThresholds::default()).unwrap();
    let col = (0..80).find(|&x| edges.at(x, 30)).unwrap();
    assert_eq!(flat.values.at(col, 30), 0.0);
    assert_eq!(flat.values.at(col - 1, 30), 1.0);
    assert_eq!(flat.values.at(col + 1, 30), 1.0);
}

#[test]
fn nadir_energy_grows_away_from_principal_point() {
    let r = render(&tilted_plane(0.0), &nadir_at(0.0, 0.0, 7.0));
    let e = energy_map(&r.frame);
    let k = r.frame.intrinsics;
    let mut by_radius: Vec<(f64, f64)> = (0..480)
        .flat_map(|y| (0..640).map(move |x| (x, y)))
        .map(|(x, y)| {
            let r2 = (x as f64 - k.cx).powi(2) + (y as f64 - k.cy).powi(2);
            (r2, e.values.at(x, y))
        })
        .collect();
    by_radius.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in by_radius.windows(2) {
        if pair[1].0 > pair[0].0 {
            assert!(pair[1].1 > pair[0].1, "{pair:?}");
        } else {
            assert!((pair[1].1 - pair[0].1).abs() < 1e-9);
        }
    }
    assert!((e.values.at(320, 240) - (7.0f64).hypot(0.5 * 7.0 / 320.0).hypot(0.5 * 7.0 / 320.0)).abs() < 1e-9);
}

#[test]
fn ramp_normals_match_analytic_normal() {
    let r = render(&tilted_plane(45.0), &nadir_at(0.0, 0.0, 4.0));
    let normals = surface_normals(&r.frame, 3).unwrap();
    let truth = Vec3::new(0.0, -(45f64.to_radians().sin()), 45f64.to_radians().cos());
    let (mut total, mut good) = (0, 0);
    for y in 3..477 {
        for x in 3..637 {
            if !normals.valid.at(x, y) {
                continue;
            }
            let n = normals.normals.at(x, y);
            assert!((n.norm() - 1.0).abs() < 1e-6);
            total += 1;
            if angle_deg(&n, &truth) < 1.0 {
                good += 1;
            }
        }
    }
    assert!(good as f64 >= 0.95 * total as f64, "{good}/{total}");
}

#[test]
fn costmap_ranges_on_rubble() {
    let cfg = PipelineConfig::real();
    let scene = canonical_scene("RUBBLE", 5).unwrap();
    let r = render(&scene.spec, &scene.rig.poses[1]);
    let f = &r.frame;
    let jde = minmax_normalize(&depth_confidence_map(f), Orientation::HigherIsBetter);
    let jfl = minmax_normalize(&flatness_map(f, cfg.canny()).unwrap(), Orientation::HigherIsBetter);
    let jn = steepness_map(&surface_normals(f, 3).unwrap(), cfg.fusion_weights().theta_th);
    let jec = minmax_normalize(&energy_map(f), Orientation::LowerIsBetter);
    let j = decision_map(&jde, &jfl, &jn, &jec, &cfg.fusion_weights()).unwrap();
    for y in 0..480 {
        for x in 0..640 {
            if let Some(v) = jn.value(x, y) {
                assert!(v > 0.0 && v <= 1.0);
            }
            if let Some(v) = j.value(x, y) {
                assert!((0.0..=1.0).contains(&v));
                assert!(jn.valid.at(x, y) && f.valid.at(x, y));
            } else {
                assert!(!jn.valid.at(x, y) || !f.valid.at(x, y));
            }
        }
    }
    for m in [&jde, &jfl, &jec] {
        let (lo, hi) = m.valid_range().unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
    }
}
