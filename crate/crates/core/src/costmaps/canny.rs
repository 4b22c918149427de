//! Canny edge detection on a metric depth raster.
//!
//! Gradients are expressed in meters of depth per pixel, so the hysteresis
//! thresholds carry physical units. Smoothing is a normalized Gaussian
//! convolution that ignores invalid depth; every invalid pixel and each of
//! its 8-neighbors is reported as an edge.

use serde::{Deserialize, Serialize};

use super::BinaryMap;
use crate::error::{Error, Result};
use crate::geometry::DepthFrame;
use crate::grid::Grid;

pub const GAUSSIAN_SIGMA: f64 = 1.0;
const GAUSSIAN_RADIUS: usize = 3;
/// Sobel responses are eight times the per-pixel central slope.
const SOBEL_NORM: f64 = 8.0;

/// Hysteresis thresholds in meters of depth gradient per pixel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CannyThresholds {
    pub low: f64,
    pub high: f64,
}

impl Default for CannyThresholds {
    fn default() -> Self {
        Self {
            low: 0.05,
            high: 0.20,
        }
    }
}

impl CannyThresholds {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        let t = Self { low, high };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low > 0.0 && self.low <= self.high && self.high.is_finite()) {
            return Err(Error::config(format!(
                "canny thresholds need 0 < low <= high (low={}, high={})",
                self.low, self.high
            )));
        }
        Ok(())
    }
}

fn gaussian_taps() -> [f64; 2 * GAUSSIAN_RADIUS + 1] {
    let mut taps = [0.0; 2 * GAUSSIAN_RADIUS + 1];
    for (i, t) in taps.iter_mut().enumerate() {
        let o = i as f64 - GAUSSIAN_RADIUS as f64;
        *t = (-(o * o) / (2.0 * GAUSSIAN_SIGMA * GAUSSIAN_SIGMA)).exp();
    }
    taps
}

/// Separable Gaussian that skips invalid and out-of-image samples and
/// renormalizes by the weight that was actually used.
fn smooth_valid(depth: &Grid<f64>, valid: &Grid<bool>) -> Grid<f64> {
    let (w, h) = depth.shape();
    let taps = gaussian_taps();
    let r = GAUSSIAN_RADIUS as isize;

    let mut num = Grid::filled(w, h, 0.0);
    let mut den = Grid::filled(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let (mut n, mut d) = (0.0, 0.0);
            for (i, &t) in taps.iter().enumerate() {
                let sx = x as isize + i as isize - r;
                if sx < 0 || sx >= w as isize {
                    continue;
                }
                let sx = sx as usize;
                if valid.at(sx, y) {
                    n += t * depth.at(sx, y);
                    d += t;
                }
            }
            num.set(x, y, n);
            den.set(x, y, d);
        }
    }

    Grid::from_fn(w, h, |x, y| {
        let (mut n, mut d) = (0.0, 0.0);
        for (j, &t) in taps.iter().enumerate() {
            let sy = y as isize + j as isize - r;
            if sy < 0 || sy >= h as isize {
                continue;
            }
            n += t * num.at(x, sy as usize);
            d += t * den.at(x, sy as usize);
        }
        if d > 0.0 {
            n / d
        } else {
            0.0
        }
    })
}

/// Quantized gradient direction as the step to the "forward" neighbor.
#[inline]
fn direction_step(gx: f64, gy: f64) -> (isize, isize) {
    // tan(22.5°) and tan(67.5°)
    const T1: f64 = 0.414_213_562_373_095_03;
    const T2: f64 = 2.414_213_562_373_095;
    let (ax, ay) = (gx.abs(), gy.abs());
    if ay < T1 * ax {
        (1, 0)
    } else if ay >= T2 * ax {
        (0, 1)
    } else if (gx > 0.0) == (gy > 0.0) {
        (1, 1)
    } else {
        (-1, 1)
    }
}

/// Canny edges of the frame's depth.
pub fn canny_edges(frame: &DepthFrame, thresholds: CannyThresholds) -> Result<BinaryMap> {
    thresholds.validate()?;
    let (w, h) = frame.shape();
    let smoothed = smooth_valid(&frame.depth, &frame.valid);

    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let s = |x: isize, y: isize| smoothed.at(clamp(x, w), clamp(y, h));

    let mut gx = Grid::filled(w, h, 0.0);
    let mut gy = Grid::filled(w, h, 0.0);
    let mut mag = Grid::filled(w, h, 0.0);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let dx = ((s(x + 1, y - 1) + 2.0 * s(x + 1, y) + s(x + 1, y + 1))
                - (s(x - 1, y - 1) + 2.0 * s(x - 1, y) + s(x - 1, y + 1)))
                / SOBEL_NORM;
            let dy = ((s(x - 1, y + 1) + 2.0 * s(x, y + 1) + s(x + 1, y + 1))
                - (s(x - 1, y - 1) + 2.0 * s(x, y - 1) + s(x + 1, y - 1)))
                / SOBEL_NORM;
            let (ux, uy) = (x as usize, y as usize);
            gx.set(ux, uy, dx);
            gy.set(ux, uy, dy);
            mag.set(ux, uy, (dx * dx + dy * dy).sqrt());
        }
    }

    // Non-maximum suppression. Plateaus of two equal responses keep the
    // pixel on the backward side so ideal step edges stay one pixel wide.
    let m = |x: isize, y: isize| mag.get_signed(x, y).copied().unwrap_or(0.0);
    let mut thin = Grid::filled(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let v = mag.at(x, y);
            if v < thresholds.low {
                continue;
            }
            let (sx, sy) = direction_step(gx.at(x, y), gy.at(x, y));
            let (xi, yi) = (x as isize, y as isize);
            if v > m(xi - sx, yi - sy) && v >= m(xi + sx, yi + sy) {
                thin.set(x, y, v);
            }
        }
    }

    // Hysteresis: grow strong seeds through 8-connected weak responses.
    let mut edges = Grid::filled(w, h, false);
    let mut stack = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if thin.at(x, y) >= thresholds.high && !edges.at(x, y) {
                edges.set(x, y, true);
                stack.push((x, y));
                while let Some((cx, cy)) = stack.pop() {
                    for ny in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
                        for nx in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                            if !edges.at(nx, ny) && thin.at(nx, ny) >= thresholds.low {
                                edges.set(nx, ny, true);
                                stack.push((nx, ny));
                            }
                        }
                    }
                }
            }
        }
    }

    force_invalid_edges(&mut edges, &frame.valid);
    Ok(edges)
}

fn force_invalid_edges(edges: &mut BinaryMap, valid: &Grid<bool>) {
    let (w, h) = valid.shape();
    for y in 0..h {
        for x in 0..w {
            if valid.at(x, y) {
                continue;
            }
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    edges.set(nx, ny, true);
                }
            }
        }
    }
}
