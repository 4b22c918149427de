//! Exact Euclidean distance transform.
//!
//! Two separable passes over squared distances: a linear sweep along rows,
//! then the lower envelope of parabolas along columns. All arithmetic is in
//! integers, so the result is exact. The one-pixel ring just outside the
//! image counts as edge, which keeps every distance finite.

use super::{BinaryMap, Costmap, CostmapKind};
use crate::grid::Grid;

/// Squared distance from every pixel to the nearest set pixel (or the
/// virtual border ring).
pub fn squared_distance_transform(edges: &BinaryMap) -> Grid<u64> {
    let (w, h) = edges.shape();
    let mut rows = Grid::filled(w, h, 0i64);

    for y in 0..h {
        let row = edges.row(y);
        let mut last: i64 = -1;
        for x in 0..w {
            if row[x] {
                last = x as i64;
            }
            rows.set(x, y, x as i64 - last);
        }
        let mut next = w as i64;
        for x in (0..w).rev() {
            if row[x] {
                next = x as i64;
            }
            let d = rows.at(x, y).min(next - x as i64);
            rows.set(x, y, d * d);
        }
    }

    let mut out = Grid::filled(w, h, 0u64);
    let mut column = vec![0i64; h + 2];
    let mut envelope = LowerEnvelope::with_capacity(h + 2);
    for x in 0..w {
        // Site i sits at row i-1; rows -1 and h are the border ring.
        column[0] = 0;
        column[h + 1] = 0;
        for y in 0..h {
            column[y + 1] = rows.at(x, y);
        }
        envelope.build(&column);
        envelope.evaluate(&column, |y, d| out.set(x, y, d as u64));
    }
    out
}

/// Euclidean distance transform; every pixel is valid.
pub fn distance_transform(edges: &BinaryMap) -> Costmap {
    let sq = squared_distance_transform(edges);
    Costmap {
        values: sq.map(|&d| (d as f64).sqrt()),
        valid: Grid::filled(edges.width(), edges.height(), true),
        kind: CostmapKind::Flatness,
    }
}

/// Rational `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    #[inline]
    fn le(self, other: Ratio) -> bool {
        self.num * other.den <= other.num * self.den
    }

    #[inline]
    fn lt_int(self, q: i64) -> bool {
        self.num < q * self.den
    }
}

/// Lower envelope of parabolas `(y - p)² + f(p)` over sites `p = i - 1`.
struct LowerEnvelope {
    sites: Vec<i64>,
    // starts[k] is where parabola k begins to dominate; None = -inf.
    starts: Vec<Option<Ratio>>,
}

impl LowerEnvelope {
    fn with_capacity(n: usize) -> Self {
        Self {
            sites: Vec::with_capacity(n),
            starts: Vec::with_capacity(n),
        }
    }

    fn build(&mut self, f: &[i64]) {
        self.sites.clear();
        self.starts.clear();
        self.sites.push(0);
        self.starts.push(None);
        for q in 1..f.len() as i64 {
            let mut s;
            loop {
                let p = *self.sites.last().unwrap();
                let fq = f[q as usize] + q * q;
                let fp = f[p as usize] + p * p;
                s = Ratio {
                    num: fq - fp,
                    den: 2 * (q - p),
                };
                match self.starts.last().unwrap() {
                    Some(z) if s.le(*z) => {
                        self.sites.pop();
                        self.starts.pop();
                    }
                    _ => break,
                }
            }
            self.sites.push(q);
            self.starts.push(Some(s));
        }
    }

    fn evaluate(&self, f: &[i64], mut emit: impl FnMut(usize, i64)) {
        let mut k = 0;
        for y in 0..f.len() - 2 {
            // Envelope coordinates are shifted by one (site 0 is row -1).
            let q = y as i64 + 1;
            while k + 1 < self.sites.len() && self.starts[k + 1].unwrap().lt_int(q) {
                k += 1;
            }
            let p = self.sites[k];
            emit(y, (q - p) * (q - p) + f[p as usize]);
        }
    }
}
