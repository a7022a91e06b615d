//! A single rooted RRT with cost bookkeeping, exact nearest/ball queries,
//! candidate-parent lists, insertion and rewiring.

mod kdtree;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;
use kdtree::KdIndex;

pub type VertexId = usize;

/// Rewiring only fires when the cost improves by more than this.
pub const REWIRE_EPSILON: f64 = 1e-12;

/// Shrinking-ball radius `gamma * (log n / n)^(1/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearRadius {
    pub gamma: f64,
    /// Radius used for a single-vertex tree, where `log 1 = 0`.
    pub max_radius: f64,
    /// Base of the logarithm; `e` unless overridden.
    #[serde(default = "natural_base")]
    pub log_base: f64,
}

fn natural_base() -> f64 {
    std::f64::consts::E
}

impl NearRadius {
    pub fn new(gamma: f64, max_radius: f64) -> Self {
        NearRadius {
            gamma,
            max_radius,
            log_base: std::f64::consts::E,
        }
    }

    pub fn radius(&self, n: usize, d: usize) -> f64 {
        if n <= 1 {
            return self.max_radius;
        }
        let n = n as f64;
        self.gamma * (n.log(self.log_base) / n).powf(1.0 / d as f64)
    }
}

/// A parent candidate for a query point `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub vertex: VertexId,
    /// `cost_to_root(vertex) + link`.
    pub cost: f64,
    /// Length of the straight edge `vertex -> z`.
    pub link: f64,
}

/// Candidates sorted ascending by total cost, ties by vertex index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateList {
    entries: Vec<Candidate>,
}

impl CandidateList {
    pub fn entries(&self) -> &[Candidate] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Clone, Debug)]
pub struct MotionTree {
    points: Vec<ConfigPoint>,
    parent: Vec<Option<VertexId>>,
    edge_cost: Vec<f64>,
    cost: Vec<f64>,
    children: Vec<Vec<VertexId>>,
    index: KdIndex,
    scratch: Vec<VertexId>,
}

impl MotionTree {
    pub fn new(root: ConfigPoint) -> Self {
        let mut index = KdIndex::new(root.dim());
        index.insert(root.coords());
        MotionTree {
            points: vec![root],
            parent: vec![None],
            edge_cost: vec![0.0],
            cost: vec![0.0],
            children: vec![Vec::new()],
            index,
            scratch: Vec::new(),
        }
    }

    pub fn root(&self) -> &ConfigPoint {
        &self.points[0]
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, v: VertexId) -> &ConfigPoint {
        &self.points[v]
    }

    pub fn points(&self) -> &[ConfigPoint] {
        &self.points
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn cost(&self, v: VertexId) -> f64 {
        self.cost[v]
    }

    pub fn edge_cost(&self, v: VertexId) -> f64 {
        self.edge_cost[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Nearest vertex to `z`, ties to the lowest index.
    pub fn nearest_vertex(&self, z: &ConfigPoint) -> Result<VertexId> {
        z.check_dim(self.dim())?;
        self.index
            .nearest(z.coords())
            .map(|(v, _)| v)
            .ok_or(PlanError::EmptyTree)
    }

    /// Vertices in the closed ball of radius `r` around `z`, ascending.
    pub fn within(&self, z: &ConfigPoint, r: f64) -> Vec<VertexId> {
        let mut out = Vec::new();
        self.index.within(z.coords(), r * r, &mut out);
        out
    }

    /// Vertices within the shrinking-ball radius for the current size.
    pub fn neighboring_vertices(&self, z: &ConfigPoint, radius: &NearRadius) -> Vec<VertexId> {
        self.within(z, radius.radius(self.len(), self.dim()))
    }

    /// Builds the candidate list for `z` over `near`, sorted by total cost.
    pub fn list_sorting(&self, z: &ConfigPoint, near: &[VertexId]) -> CandidateList {
        let mut entries: Vec<Candidate> = near
            .iter()
            .map(|&v| {
                let link = self.points[v].dist(z);
                Candidate {
                    vertex: v,
                    cost: self.cost[v] + link,
                    link,
                }
            })
            .collect();
        entries.sort_unstable_by(|a, b| a.cost.total_cmp(&b.cost).then(a.vertex.cmp(&b.vertex)));
        CandidateList { entries }
    }

    /// First candidate, in cost order, whose edge to `z` is collision-free.
    pub fn pick_best_parent(
        &self,
        env: &Environment,
        z: &ConfigPoint,
        list: &CandidateList,
        resolution: f64,
    ) -> Option<Candidate> {
        list.entries
            .iter()
            .find(|c| env.segment_free(&self.points[c.vertex], z, resolution))
            .copied()
    }

    /// Appends `z` as a child of `parent`. The caller guarantees the edge is
    /// collision-free.
    pub fn vertex_insert(&mut self, z: ConfigPoint, parent: VertexId) -> Result<VertexId> {
        if parent >= self.len() {
            return Err(PlanError::InvalidArgument(format!(
                "parent {parent} out of range for tree of {} vertices",
                self.len()
            )));
        }
        z.check_dim(self.dim())?;
        let edge = self.points[parent].dist(&z);
        let id = self.len();
        self.index.insert(z.coords());
        self.points.push(z);
        self.parent.push(Some(parent));
        self.edge_cost.push(edge);
        self.cost.push(self.cost[parent] + edge);
        self.children.push(Vec::new());
        self.children[parent].push(id);
        Ok(id)
    }

    /// Reparents near vertices through `z_new` where that strictly lowers
    /// their cost. Returns the number of reparent operations.
    pub fn rewiring_vertices(
        &mut self,
        env: &Environment,
        z_new: VertexId,
        list: &CandidateList,
        resolution: f64,
    ) -> usize {
        self.rewire_observed(env, z_new, list, resolution, |_, _| {})
    }

    /// [`rewiring_vertices`](Self::rewiring_vertices), reporting every
    /// vertex whose cost-to-root decreased together with its new cost.
    pub fn rewire_observed(
        &mut self,
        env: &Environment,
        z_new: VertexId,
        list: &CandidateList,
        resolution: f64,
        mut on_cost_change: impl FnMut(VertexId, f64),
    ) -> usize {
        let mut rewires = 0;
        for c in &list.entries {
            let v = c.vertex;
            if v == z_new || self.parent[v].is_none() {
                continue;
            }
            let through = self.cost[z_new] + c.link;
            if through < self.cost[v] - REWIRE_EPSILON
                && env.segment_free(&self.points[z_new], &self.points[v], resolution)
            {
                self.reparent(v, z_new, c.link);
                rewires += 1;
                self.propagate(v, &mut on_cost_change);
            }
        }
        rewires
    }

    fn reparent(&mut self, v: VertexId, new_parent: VertexId, edge: f64) {
        if let Some(old) = self.parent[v] {
            let siblings = &mut self.children[old];
            if let Some(pos) = siblings.iter().position(|&c| c == v) {
                siblings.swap_remove(pos);
            }
        }
        self.parent[v] = Some(new_parent);
        self.children[new_parent].push(v);
        self.edge_cost[v] = edge;
    }

    /// Recomputes cost-to-root over the subtree rooted at `v` (inclusive).
    fn propagate(&mut self, v: VertexId, on_cost_change: &mut impl FnMut(VertexId, f64)) {
        let mut stack = std::mem::take(&mut self.scratch);
        stack.clear();
        stack.push(v);
        while let Some(u) = stack.pop() {
            let p = self.parent[u].expect("non-root vertex");
            self.cost[u] = self.cost[p] + self.edge_cost[u];
            on_cost_change(u, self.cost[u]);
            stack.extend_from_slice(&self.children[u]);
        }
        self.scratch = stack;
    }

    /// Root-to-`v` vertex sequence.
    pub fn extract_path(&self, v: VertexId) -> Vec<ConfigPoint> {
        let mut path = Vec::new();
        let mut cur = Some(v);
        while let Some(u) = cur {
            path.push(self.points[u].clone());
            cur = self.parent[u];
        }
        path.reverse();
        path
    }

    /// Checks every structural invariant. Returns the list of violations.
    pub fn audit(&self, env: &Environment, resolution: f64) -> Vec<String> {
        let mut violations = Vec::new();
        let n = self.len();
        if self.parent[0].is_some() || self.cost[0] != 0.0 {
            violations.push("root must have no parent and zero cost".to_string());
        }
        for v in 1..n {
            let Some(p) = self.parent[v] else {
                violations.push(format!("vertex {v} has no parent"));
                continue;
            };
            if p >= n {
                violations.push(format!("vertex {v} has out-of-range parent {p}"));
                continue;
            }
            let expected = self.cost[p] + self.edge_cost[v];
            if (self.cost[v] - expected).abs() > 1e-9 {
                violations.push(format!(
                    "vertex {v}: cost {} != parent cost + edge {expected}",
                    self.cost[v]
                ));
            }
            if (self.edge_cost[v] - self.points[p].dist(&self.points[v])).abs() > 1e-9 {
                violations.push(format!("vertex {v}: edge cost does not match its length"));
            }
            if !env.segment_free(&self.points[p], &self.points[v], resolution) {
                violations.push(format!("edge {p} -> {v} is not collision-free"));
            }
            if !self.children[p].contains(&v) {
                violations.push(format!("vertex {v} missing from children of {p}"));
            }
        }
        // every vertex reaches the root in at most n steps
        let mut depth_known = vec![false; n];
        depth_known[0] = true;
        for v in 0..n {
            let mut chain = Vec::new();
            let mut cur = v;
            while !depth_known[cur] {
                chain.push(cur);
                if chain.len() > n {
                    violations.push(format!("cycle through vertex {v}"));
                    break;
                }
                match self.parent[cur] {
                    Some(p) if p < n => cur = p,
                    _ => break,
                }
            }
            for u in chain {
                depth_known[u] = true;
            }
        }
        let child_total: usize = self.children.iter().map(Vec::len).sum();
        if child_total != n - 1 {
            violations.push(format!(
                "child lists hold {child_total} entries, expected {}",
                n - 1
            ));
        }
        violations
    }

    /// One line per vertex: `id,parent_id,coords...,cost_to_root`, with
    /// `-1` as the root's parent.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for v in 0..self.len() {
            let parent = self.parent[v].map_or(-1, |p| p as i64);
            let _ = write!(out, "{v},{parent}");
            for c in self.points[v].coords() {
                let _ = write!(out, ",{c}");
            }
            let _ = writeln!(out, ",{}", self.cost[v]);
        }
        out
    }
}
