//! Incremental 3-d tree keyed by insertion order.
//!
//! Points are appended as leaves; when a path grows much deeper than
//! `log2(n)` the tree is rebuilt around medians. Nearest-neighbor ties are
//! broken toward the lowest insertion index.

type Point = [f64; 3];

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    point: Point,
    id: usize,
    axis: u8,
    left: u32,
    right: u32,
}

#[derive(Clone, Debug, Default)]
pub struct KdTree {
    nodes: Vec<Node>,
    root: u32,
}

#[inline]
fn dist2(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

impl KdTree {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            root: NONE,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Adds `point` under the next insertion index, which is returned.
    pub fn insert(&mut self, point: Point) -> usize {
        let id = self.nodes.len();
        let idx = id as u32;
        if self.root == NONE {
            self.nodes.push(Node {
                point,
                id,
                axis: 0,
                left: NONE,
                right: NONE,
            });
            self.root = idx;
            return id;
        }
        let mut cur = self.root as usize;
        let mut depth = 1usize;
        loop {
            let node = &self.nodes[cur];
            let axis = node.axis as usize;
            let go_left = point[axis] < node.point[axis];
            let next = if go_left { node.left } else { node.right };
            if next == NONE {
                let child_axis = ((axis + 1) % 3) as u8;
                if go_left {
                    self.nodes[cur].left = idx;
                } else {
                    self.nodes[cur].right = idx;
                }
                self.nodes.push(Node {
                    point,
                    id,
                    axis: child_axis,
                    left: NONE,
                    right: NONE,
                });
                depth += 1;
                break;
            }
            cur = next as usize;
            depth += 1;
        }
        let n = self.nodes.len() as f64;
        if depth as f64 > 2.0 * n.log2() + 8.0 {
            self.rebuild();
        }
        id
    }

    fn rebuild(&mut self) {
        let mut order: Vec<u32> = (0..self.nodes.len() as u32).collect();
        self.root = self.build(&mut order, 0);
    }

    fn build(&mut self, idx: &mut [u32], depth: usize) -> u32 {
        if idx.is_empty() {
            return NONE;
        }
        let axis = depth % 3;
        let nodes = &self.nodes;
        idx.sort_unstable_by(|&a, &b| {
            let (pa, pb) = (&nodes[a as usize], &nodes[b as usize]);
            pa.point[axis]
                .total_cmp(&pb.point[axis])
                .then(pa.id.cmp(&pb.id))
        });
        // Leftmost of any run of equal keys so that `<` routes equals right.
        let mut mid = idx.len() / 2;
        let key = self.nodes[idx[mid] as usize].point[axis];
        while mid > 0 && self.nodes[idx[mid - 1] as usize].point[axis] == key {
            mid -= 1;
        }
        let node = idx[mid];
        let (lo, rest) = idx.split_at_mut(mid);
        let hi = &mut rest[1..];
        let left = self.build(lo, depth + 1);
        let right = self.build(hi, depth + 1);
        let n = &mut self.nodes[node as usize];
        n.axis = axis as u8;
        n.left = left;
        n.right = right;
        node
    }

    /// Nearest point as `(insertion index, squared distance)`.
    pub fn nearest(&self, q: &Point) -> Option<(usize, f64)> {
        if self.root == NONE {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        self.nearest_in(self.root, q, &mut best);
        Some((best.1, best.0))
    }

    fn nearest_in(&self, node: u32, q: &Point, best: &mut (f64, usize)) {
        let n = &self.nodes[node as usize];
        let d2 = dist2(&n.point, q);
        if d2 < best.0 || (d2 == best.0 && n.id < best.1) {
            *best = (d2, n.id);
        }
        let axis = n.axis as usize;
        let diff = q[axis] - n.point[axis];
        let (near, far) = if diff < 0.0 {
            (n.left, n.right)
        } else {
            (n.right, n.left)
        };
        if near != NONE {
            self.nearest_in(near, q, best);
        }
        if far != NONE && diff * diff <= best.0 {
            self.nearest_in(far, q, best);
        }
    }

    /// Insertion indices of all points with squared distance `<= r2`, ascending.
    pub fn within(&self, q: &Point, r2: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.root != NONE {
            let mut stack = vec![self.root];
            while let Some(i) = stack.pop() {
                let n = &self.nodes[i as usize];
                if dist2(&n.point, q) <= r2 {
                    out.push(n.id);
                }
                let axis = n.axis as usize;
                let diff = q[axis] - n.point[axis];
                if n.left != NONE && (diff < 0.0 || diff * diff <= r2) {
                    stack.push(n.left);
                }
                if n.right != NONE && (diff >= 0.0 || diff * diff <= r2) {
                    stack.push(n.right);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn max_depth(&self) -> usize {
        fn walk(t: &KdTree, i: u32) -> usize {
            if i == NONE {
                0
            } else {
                let n = &t.nodes[i as usize];
                1 + walk(t, n.left).max(walk(t, n.right))
            }
        }
        walk(self, self.root)
    }

    /// Depth of the deepest leaf.
    pub fn depth(&self) -> usize {
        self.max_depth()
    }
}
