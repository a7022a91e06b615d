//! RRT* and P-RRT*: one start-rooted tree, samples inserted directly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::recorder::Recorder;
use super::{validate_path, PlannerConfig, PlannerObserver, Run};
use crate::environment::Environment;
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;
use crate::potential::rgd;
use crate::tree::{MotionTree, VertexId};

/// Length of the final link from `p` to the goal, or infinity when `p` is
/// outside the goal region or the link is blocked.
fn goal_link(env: &Environment, p: &ConfigPoint, resolution: f64) -> f64 {
    if env.in_goal_region(p) && env.segment_free(p, env.goal(), resolution) {
        p.dist(env.goal())
    } else {
        f64::INFINITY
    }
}

pub(super) fn run<O: PlannerObserver>(
    env: &Environment,
    cfg: &PlannerConfig,
    observer: &mut O,
) -> Result<Run> {
    env.start().check_dim(env.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = cfg.near_radius();
    let res = cfg.collision_resolution;
    let mut rec = Recorder::new(cfg);

    let mut tree = MotionTree::new(env.start().clone());
    let mut links = vec![goal_link(env, env.start(), res)];
    let mut best: Option<VertexId> = None;
    if rec.improve(0, links[0]) {
        best = Some(0);
    }

    let mut iterations = 0;
    let mut rewires = 0u64;
    for i in 0..cfg.max_iterations {
        let it = i + 1;
        iterations = it;
        let z_rand = env.sample_free(&mut rng)?;
        let z = if cfg.kind.is_guided() {
            rgd(&z_rand, &cfg.potential, env)
        } else {
            z_rand.clone()
        };
        observer.sampled(it, &z_rand, &z, std::slice::from_ref(&tree));

        let mut near = tree.neighboring_vertices(&z, &radius);
        if near.is_empty() {
            near.push(tree.nearest_vertex(&z)?);
        }
        let list = tree.list_sorting(&z, &near);
        if let Some(parent) = tree.pick_best_parent(env, &z, &list, res) {
            let v = tree.vertex_insert(z, parent.vertex)?;
            links.push(goal_link(env, tree.point(v), res));
            let mut offer = |u: VertexId, cost: f64| {
                if rec.improve(it, cost + links[u]) {
                    best = Some(u);
                }
            };
            offer(v, tree.cost(v));
            rewires += tree.rewire_observed(env, v, &list, res, &mut offer) as u64;
        }

        observer.iteration_end(it, std::slice::from_ref(&tree));
        if rec.end_iteration(it) {
            break;
        }
    }

    let best_path = best.map(|v| {
        let mut path = tree.extract_path(v);
        if links[v] > 0.0 {
            path.push(env.goal().clone());
        }
        path
    });
    if let Some(path) = &best_path {
        if !validate_path(env, path, res) {
            return Err(PlanError::Validation(
                "internal error: best path failed re-validation".into(),
            ));
        }
    }
    let result = rec.finish(cfg, iterations, rewires, best_path, vec![tree.len()]);
    Ok(Run {
        result,
        trees: vec![tree],
    })
}
