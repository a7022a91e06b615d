//! Two-tree planners: extend-and-connect (B-RRT*, PB-RRT*) and the
//! intelligent variants that insert each sample into whichever tree offers
//! the cheaper parent (IB-RRT*, PIB-RRT*).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ops::{concatenate_solution, connect, extend, get_best_tree_parent, Link, Side};
use super::recorder::Recorder;
use super::{validate_path, PlannerConfig, PlannerObserver, PoleSchedule, Run};
use crate::environment::Environment;
use crate::error::Result;
use crate::point::ConfigPoint;
use crate::potential::{bpg_pole, descend, PoleKind};
use crate::tree::MotionTree;

struct State {
    /// `trees[0]` is rooted at the start, `trees[1]` at the goal.
    trees: [MotionTree; 2],
    best_path: Option<Vec<ConfigPoint>>,
    rewires: u64,
}

impl State {
    fn new(env: &Environment) -> Self {
        State {
            trees: [
                MotionTree::new(env.start().clone()),
                MotionTree::new(env.goal().clone()),
            ],
            best_path: None,
            rewires: 0,
        }
    }

    /// Mutable active tree and shared other tree.
    fn split(&mut self, active: Side) -> (&mut MotionTree, &MotionTree) {
        let [a, b] = &mut self.trees;
        match active {
            Side::A => (a, b),
            Side::B => (b, a),
        }
    }

    fn offer(
        &mut self,
        rec: &mut Recorder,
        env: &Environment,
        iteration: u64,
        cost: f64,
        link: Link,
        resolution: f64,
    ) {
        if !(cost < rec.best()) {
            return;
        }
        let path = concatenate_solution(&self.trees, &link);
        if validate_path(env, &path, resolution) && rec.improve(iteration, cost) {
            self.best_path = Some(path);
        }
    }

    fn finish(self, rec: Recorder, cfg: &PlannerConfig, iterations: u64) -> Run {
        let sizes = self.trees.iter().map(MotionTree::len).collect();
        let result = rec.finish(cfg, iterations, self.rewires, self.best_path, sizes);
        Run {
            result,
            trees: self.trees.into(),
        }
    }
}

fn guide(
    env: &Environment,
    cfg: &PlannerConfig,
    z_rand: &ConfigPoint,
    i: u64,
    active: Option<Side>,
) -> ConfigPoint {
    if !cfg.kind.is_guided() {
        return z_rand.clone();
    }
    let pole = match (cfg.pole_schedule, active) {
        (PoleSchedule::ActiveRoot, Some(Side::A)) => PoleKind::Init,
        (PoleSchedule::ActiveRoot, Some(Side::B)) => PoleKind::Goal,
        _ => bpg_pole(i),
    };
    descend(z_rand, pole.point(env), &cfg.potential, env)
}

pub(super) fn run_extend_connect<O: PlannerObserver>(
    env: &Environment,
    cfg: &PlannerConfig,
    observer: &mut O,
) -> Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = cfg.near_radius();
    let res = cfg.collision_resolution;
    let mut rec = Recorder::new(cfg);
    let mut st = State::new(env);
    let mut active = Side::A;

    let mut iterations = 0;
    for i in 0..cfg.max_iterations {
        let it = i + 1;
        iterations = it;
        let z_rand = env.sample_free(&mut rng)?;
        let z = guide(env, cfg, &z_rand, i, Some(active));
        observer.sampled(it, &z_rand, &z, &st.trees);

        let (ta, tb) = st.split(active);
        let nearest = ta.nearest_vertex(&z)?;
        let mut found = None;
        if let Some(z_new) = extend(ta.point(nearest), &z, cfg.eps_steer, env, res) {
            let mut near = ta.neighboring_vertices(&z_new, &radius);
            if near.is_empty() {
                near.push(nearest);
            }
            let list = ta.list_sorting(&z_new, &near);
            if let Some(parent) = ta.pick_best_parent(env, &z_new, &list, res) {
                let v = ta.vertex_insert(z_new, parent.vertex)?;
                let rewired = ta.rewiring_vertices(env, v, &list, res) as u64;
                let z_v = ta.point(v);
                let conn = tb.nearest_vertex(z_v)?;
                if let Some(bridge) = connect(env, z_v, conn, tb, cfg.eps_steer, &radius, res) {
                    let link = Link {
                        side: active,
                        x: v,
                        y: bridge.parent,
                    };
                    found = Some((ta.cost(v) + bridge.cost, link));
                }
                st.rewires += rewired;
            }
        }
        if let Some((cost, link)) = found {
            st.offer(&mut rec, env, it, cost, link, res);
        }
        active = active.other();

        observer.iteration_end(it, &st.trees);
        if rec.end_iteration(it) {
            break;
        }
    }
    Ok(st.finish(rec, cfg, iterations))
}

pub(super) fn run_intelligent<O: PlannerObserver>(
    env: &Environment,
    cfg: &PlannerConfig,
    observer: &mut O,
) -> Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = cfg.near_radius();
    let res = cfg.collision_resolution;
    let mut rec = Recorder::new(cfg);
    let mut st = State::new(env);

    let mut iterations = 0;
    for i in 0..cfg.max_iterations {
        let it = i + 1;
        iterations = it;
        let z_rand = env.sample_free(&mut rng)?;
        let z = guide(env, cfg, &z_rand, i, None);
        observer.sampled(it, &z_rand, &z, &st.trees);

        let [ta, tb] = &st.trees;
        let mut near_a = ta.neighboring_vertices(&z, &radius);
        let mut near_b = tb.neighboring_vertices(&z, &radius);
        let mut connection = true;
        if near_a.is_empty() && near_b.is_empty() {
            near_a.push(ta.nearest_vertex(&z)?);
            near_b.push(tb.nearest_vertex(&z)?);
            connection = false;
        }
        let lists = [ta.list_sorting(&z, &near_a), tb.list_sorting(&z, &near_b)];
        let choice = get_best_tree_parent(env, &z, ta, &lists[0], tb, &lists[1], connection, res);
        if let Some(tp) = choice {
            let s = tp.side.index();
            let tree = &mut st.trees[s];
            let v = tree.vertex_insert(z, tp.parent.vertex)?;
            st.rewires += tree.rewiring_vertices(env, v, &lists[s], res) as u64;
            if let (Some(cost), Some(bridge)) = (tp.path_cost(), tp.bridge) {
                let link = Link {
                    side: tp.side,
                    x: v,
                    y: bridge.vertex,
                };
                st.offer(&mut rec, env, it, cost, link, res);
            }
        }

        observer.iteration_end(it, &st.trees);
        if rec.end_iteration(it) {
            break;
        }
    }
    Ok(st.finish(rec, cfg, iterations))
}
