//! Sub-heuristics shared by the planner loops.

use crate::environment::Environment;
use crate::point::ConfigPoint;
use crate::tree::{Candidate, CandidateList, MotionTree, NearRadius, VertexId};

/// Straight segment `a -> b` if it is collision-free.
pub fn steer(
    a: &ConfigPoint,
    b: &ConfigPoint,
    env: &Environment,
    resolution: f64,
) -> Option<[ConfigPoint; 2]> {
    env.segment_free(a, b, resolution)
        .then(|| [a.clone(), b.clone()])
}

/// Moves from `from` toward `target` by at most `eps_steer`. Returns the
/// new point when it and the segment leading to it are free.
pub fn extend(
    from: &ConfigPoint,
    target: &ConfigPoint,
    eps_steer: f64,
    env: &Environment,
    resolution: f64,
) -> Option<ConfigPoint> {
    let d = from.dist(target);
    let z_new = if d <= eps_steer {
        target.clone()
    } else {
        from.lerp(target, eps_steer / d)
    };
    env.segment_free(from, &z_new, resolution).then_some(z_new)
}

/// Result of a successful [`connect`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bridge {
    /// Vertex of the other tree that links straight to the query point.
    pub parent: VertexId,
    /// `cost_to_root(parent) + link`.
    pub cost: f64,
    pub link: f64,
    /// Number of extend steps taken to reach the query point.
    pub extends: usize,
}

/// Greedy connection of `z_new` to `tree`, starting at its vertex `z_conn`.
///
/// Extends from `z_conn` toward `z_new` until within `resolution` of it,
/// then picks the cheapest collision-free parent for the final link among
/// the neighbours of the reached point (plus `z_conn` itself, which the
/// walk has just shown to be reachable).
pub fn connect(
    env: &Environment,
    z_new: &ConfigPoint,
    z_conn: VertexId,
    tree: &MotionTree,
    eps_steer: f64,
    radius: &NearRadius,
    resolution: f64,
) -> Option<Bridge> {
    let mut cur = tree.point(z_conn).clone();
    let mut extends = 0;
    while cur.dist(z_new) > resolution {
        cur = extend(&cur, z_new, eps_steer, env, resolution)?;
        extends += 1;
    }
    let mut near = tree.neighboring_vertices(&cur, radius);
    if let Err(pos) = near.binary_search(&z_conn) {
        near.insert(pos, z_conn);
    }
    let list = tree.list_sorting(z_new, &near);
    let best = tree.pick_best_parent(env, z_new, &list, resolution)?;
    Some(Bridge {
        parent: best.vertex,
        cost: best.cost,
        link: best.link,
        extends,
    })
}

/// Which of the two trees of a bidirectional search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Outcome of [`get_best_tree_parent`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeParent {
    /// Tree the query point should be inserted into.
    pub side: Side,
    pub parent: Candidate,
    /// Best feasible parent in the other tree, present only when a
    /// connection was requested and both trees offered one.
    pub bridge: Option<Candidate>,
}

impl TreeParent {
    /// Cost of the end-to-end path through the query point, if any.
    pub fn path_cost(&self) -> Option<f64> {
        self.bridge.map(|b| self.parent.cost + b.cost)
    }
}

/// Cheapest feasible parent over both trees' candidate lists.
#[allow(clippy::too_many_arguments)]
pub fn get_best_tree_parent(
    env: &Environment,
    z: &ConfigPoint,
    tree_a: &MotionTree,
    list_a: &CandidateList,
    tree_b: &MotionTree,
    list_b: &CandidateList,
    connection: bool,
    resolution: f64,
) -> Option<TreeParent> {
    let best_a = tree_a.pick_best_parent(env, z, list_a, resolution);
    let best_b = tree_b.pick_best_parent(env, z, list_b, resolution);
    let (side, parent, other) = match (best_a, best_b) {
        (None, None) => return None,
        (Some(a), None) => (Side::A, a, None),
        (None, Some(b)) => (Side::B, b, None),
        (Some(a), Some(b)) if a.cost <= b.cost => (Side::A, a, Some(b)),
        (Some(a), Some(b)) => (Side::B, b, Some(a)),
    };
    Some(TreeParent {
        side,
        parent,
        bridge: if connection { other } else { None },
    })
}

/// A straight link between vertex `x` of tree `side` and vertex `y` of the
/// other tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link {
    pub side: Side,
    pub x: VertexId,
    pub y: VertexId,
}

impl Link {
    pub fn cost(&self, trees: &[MotionTree; 2]) -> f64 {
        let tx = &trees[self.side.index()];
        let ty = &trees[self.side.other().index()];
        tx.cost(self.x) + tx.point(self.x).dist(ty.point(self.y)) + ty.cost(self.y)
    }
}

/// Joins the two root paths across `link`. `trees[0]` is rooted at the
/// start and `trees[1]` at the goal; the result always runs start to goal.
pub fn concatenate_solution(trees: &[MotionTree; 2], link: &Link) -> Vec<ConfigPoint> {
    let (init_end, goal_end) = match link.side {
        Side::A => (link.x, link.y),
        Side::B => (link.y, link.x),
    };
    let mut path = trees[0].extract_path(init_end);
    let mut tail = trees[1].extract_path(goal_end);
    tail.reverse();
    path.extend(tail);
    path
}
