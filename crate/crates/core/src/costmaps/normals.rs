//! Surface normals by averaged 3D gradients.
//!
//! Central-difference tangents of the camera-frame point cloud are
//! box-averaged over a square window, crossed, and oriented toward the
//! camera before being rotated into the world frame.

use crate::error::{Error, Result};
use crate::geometry::{backproject, DepthFrame, Vec3};
use crate::grid::Grid;

/// Cross products shorter than this fraction of `|h||v|` count as degenerate.
const DEGENERATE_SINE: f64 = 1e-9;

/// Unit surface normals in the world frame.
#[derive(Clone, Debug)]
pub struct NormalMap {
    pub normals: Grid<Vec3>,
    pub valid: Grid<bool>,
}

/// Summed-area table of a per-pixel flag.
struct CountTable {
    stride: usize,
    sum: Vec<u32>,
}

impl CountTable {
    fn new(w: usize, h: usize, flag: impl Fn(usize) -> bool) -> Self {
        let stride = w + 1;
        let mut sum = vec![0u32; stride * (h + 1)];
        for y in 0..h {
            let mut row = 0u32;
            for x in 0..w {
                row += flag(y * w + x) as u32;
                let i = (y + 1) * stride + x + 1;
                sum[i] = sum[i - stride] + row;
            }
        }
        Self { stride, sum }
    }

    /// Number of flagged pixels in `[x0, x1) × [y0, y1)`.
    #[inline]
    fn count(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
        let s = self.stride;
        self.sum[y1 * s + x1] + self.sum[y0 * s + x0] - self.sum[y0 * s + x1] - self.sum[y1 * s + x0]
    }
}

/// Sums of `row` over the `2k+1` samples centered on each position in
/// `k..len-k`, written to `dst`.
fn window_sums(row: &[Vec3], k: usize, dst: &mut [Vec3]) {
    let mut acc: Vec3 = row[..2 * k + 1].iter().sum();
    dst[k] = acc;
    for x in k + 1..row.len() - k {
        acc += row[x + k] - row[x - k - 1];
        dst[x] = acc;
    }
}

pub fn surface_normals(frame: &DepthFrame, smoothing_window: usize) -> Result<NormalMap> {
    if smoothing_window == 0 || smoothing_window.is_multiple_of(2) {
        return Err(Error::config(format!(
            "smoothing window must be odd and >= 1, got {smoothing_window}"
        )));
    }
    let (w, h) = frame.shape();
    let k = smoothing_window / 2;
    let mut normals = Grid::filled(w, h, Vec3::zeros());
    let mut valid = Grid::filled(w, h, false);
    if w < smoothing_window + 2 || h < smoothing_window + 2 {
        return Ok(NormalMap { normals, valid });
    }

    // Invalid pixels backproject to zero, so they drop out of the sums; the
    // missing counts decide validity.
    let cloud = backproject(frame);
    let p = cloud.points.as_slice();
    let ok = cloud.valid.as_slice();
    let missing = CountTable::new(w, h, |i| !ok[i]);
    let line = |y: usize| &p[y * w..(y + 1) * w];

    // Window sums of central differences telescope: the horizontal tangents
    // summed over the window equal four column sums of points, the vertical
    // ones four row sums. Column sums slide down with `y`; row sums of the
    // 2k+3 rows in reach are kept in a ring.
    let ring = 2 * k + 3;
    let mut row_sums = vec![Vec3::zeros(); ring * w];
    for y in 0..ring {
        window_sums(line(y), k, &mut row_sums[y * w..(y + 1) * w]);
    }
    let mut col = vec![Vec3::zeros(); w];
    for y in 1..=2 * k + 1 {
        for (c, v) in col.iter_mut().zip(line(y)) {
            *c += v;
        }
    }

    let rotation = frame.pose_world_from_camera.rotation();
    let out_n = normals.as_mut_slice();
    let out_v = valid.as_mut_slice();
    for y in k + 1..h - k - 1 {
        if y > k + 1 {
            for ((c, a), s) in col.iter_mut().zip(line(y + k)).zip(line(y - k - 1)) {
                *c += a - s;
            }
            let slot = (y + k + 1) % ring;
            window_sums(line(y + k + 1), k, &mut row_sums[slot * w..(slot + 1) * w]);
        }
        let rs = |dy: usize| {
            let slot = dy % ring;
            &row_sums[slot * w..(slot + 1) * w]
        };
        let (below2, below1, above1, above2) = (rs(y + k + 1), rs(y + k), rs(y - k), rs(y - k - 1));
        for x in k + 1..w - k - 1 {
            let i = y * w + x;
            if !ok[i]
                || missing.count(x - k - 1, y - k, x + k + 2, y + k + 1) > 0
                || missing.count(x - k, y - k - 1, x + k + 1, y + k + 2) > 0
            {
                continue;
            }
            let hs = col[x + k + 1] + col[x + k] - col[x - k] - col[x - k - 1];
            let vs = below2[x] + below1[x] - above1[x] - above2[x];
            let n = hs.cross(&vs);
            let scale = hs.norm() * vs.norm();
            let len = n.norm();
            if !(len > DEGENERATE_SINE * scale) {
                continue;
            }
            let mut n = n / len;
            if n.dot(&p[i]) > 0.0 {
                n = -n;
            }
            out_n[i] = rotation * n;
            out_v[i] = true;
        }
    }
    Ok(NormalMap { normals, valid })
}
