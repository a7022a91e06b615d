//! Insert-only k-d tree over the vertices of a [`MotionTree`](super::MotionTree).
//!
//! Node `i` is vertex `i`, so insertion order is vertex order and no
//! separate id mapping is kept. Queries are exact.

use crate::point::dist_sq;

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub(crate) struct KdIndex {
    dim: usize,
    coords: Vec<f64>,
    children: Vec<[u32; 2]>,
}

impl KdIndex {
    pub fn new(dim: usize) -> Self {
        KdIndex {
            dim,
            coords: Vec::new(),
            children: Vec::new(),
        }
    }

    fn point(&self, i: u32) -> &[f64] {
        let s = i as usize * self.dim;
        &self.coords[s..s + self.dim]
    }

    pub fn insert(&mut self, p: &[f64]) {
        let id = self.children.len() as u32;
        self.coords.extend_from_slice(p);
        self.children.push([NIL, NIL]);
        if id == 0 {
            return;
        }
        let mut node = 0u32;
        let mut depth = 0usize;
        loop {
            let axis = depth % self.dim;
            let side = usize::from(p[axis] >= self.point(node)[axis]);
            let next = self.children[node as usize][side];
            if next == NIL {
                self.children[node as usize][side] = id;
                return;
            }
            node = next;
            depth += 1;
        }
    }

    /// Nearest vertex; ties go to the lowest index.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        if self.children.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, u32::MAX);
        self.nearest_rec(0, 0, q, &mut best);
        Some((best.1 as usize, best.0))
    }

    fn nearest_rec(&self, node: u32, depth: usize, q: &[f64], best: &mut (f64, u32)) {
        let p = self.point(node);
        let d2 = dist_sq(p, q);
        if d2 < best.0 || (d2 == best.0 && node < best.1) {
            *best = (d2, node);
        }
        let axis = depth % self.dim;
        let diff = q[axis] - p[axis];
        let [left, right] = self.children[node as usize];
        let (near, far) = if diff < 0.0 {
            (left, right)
        } else {
            (right, left)
        };
        if near != NIL {
            self.nearest_rec(near, depth + 1, q, best);
        }
        if far != NIL && diff * diff <= best.0 {
            self.nearest_rec(far, depth + 1, q, best);
        }
    }

    /// All vertices with squared distance `<= r2`, ascending by index.
    pub fn within(&self, q: &[f64], r2: f64, out: &mut Vec<usize>) {
        out.clear();
        if self.children.is_empty() {
            return;
        }
        let mut stack = vec![(0u32, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            let p = self.point(node);
            if dist_sq(p, q) <= r2 {
                out.push(node as usize);
            }
            let axis = depth % self.dim;
            let diff = q[axis] - p[axis];
            let [left, right] = self.children[node as usize];
            let (near, far) = if diff < 0.0 {
                (left, right)
            } else {
                (right, left)
            };
            if near != NIL {
                stack.push((near, depth + 1));
            }
            if far != NIL && diff * diff <= r2 {
                stack.push((far, depth + 1));
            }
        }
        out.sort_unstable();
    }
}
