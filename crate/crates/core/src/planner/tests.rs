use super::*;
use crate::defaults::Defaults;
use crate::environment::{Bounds, Obstacle};
use crate::point::path_length;

fn open_env() -> Environment {
    Environment::new(
        Bounds::new([-5.0, -5.0], [15.0, 5.0]),
        vec![],
        [0.0, 0.0],
        [10.0, 0.0],
        0.5,
    )
    .unwrap()
}

fn cluttered_env() -> Environment {
    let obstacles = vec![
        Obstacle::new_box([2.0, -5.0], [3.0, 2.0]),
        Obstacle::new_box([6.0, -2.0], [7.0, 5.0]),
        Obstacle::new_sphere([4.5, -3.0], 1.0),
        Obstacle::new_sphere([9.0, 3.0], 0.8),
    ];
    Environment::new(
        Bounds::new([-5.0, -5.0], [15.0, 5.0]),
        obstacles,
        [0.0, 0.0],
        [10.0, 0.0],
        0.5,
    )
    .unwrap()
}

/// Goal inside a closed ring of four walls.
fn enclosed_env() -> Environment {
    let walls = vec![
        Obstacle::new_box([8.0, -2.0], [12.0, -1.5]),
        Obstacle::new_box([8.0, 1.5], [12.0, 2.0]),
        Obstacle::new_box([8.0, -2.0], [8.5, 2.0]),
        Obstacle::new_box([11.5, -2.0], [12.0, 2.0]),
    ];
    Environment::new(
        Bounds::new([-5.0, -5.0], [15.0, 5.0]),
        walls,
        [0.0, 0.0],
        [10.0, 0.0],
        0.5,
    )
    .unwrap()
}

fn config(kind: PlannerKind, env: &Environment, n: u64, seed: u64) -> PlannerConfig {
    let mut cfg = Defaults::default().planner_config(kind, env, seed).unwrap();
    cfg.max_iterations = n;
    cfg
}

fn check_result(env: &Environment, cfg: &PlannerConfig, r: &RunResult) {
    assert_eq!(r.best_cost.is_some(), r.best_path.is_some());
    assert_eq!(r.failed, r.best_path.is_none());
    assert_eq!(r.theta, r.rewire_count as f64 / r.total_iterations as f64);
    assert!(r
        .cost_trace
        .windows(2)
        .all(|w| w[1].cost <= w[0].cost && w[1].iteration >= w[0].iteration));
    if let Some(path) = &r.best_path {
        assert!(validate_path(env, path, cfg.collision_resolution));
        let cost = r.best_cost.unwrap();
        assert!(
            (path_length(path) - cost).abs() <= 1e-9,
            "{} vs {cost}",
            path_length(path)
        );
        assert_eq!(r.cost_trace.last().unwrap().cost, cost);
    }
}

#[test]
fn open_space_reaches_straight_line_cost() {
    let env = open_env();
    for kind in PlannerKind::ALL {
        let cfg = config(kind, &env, 20_000, 1);
        let r = run_planner(&env, &cfg).unwrap();
        check_result(&env, &cfg, &r);
        let cost = r.best_cost.unwrap();
        assert!((10.0 - 1e-9..=10.2).contains(&cost), "{kind}: {cost}");
    }
}

#[test]
fn enclosed_goal_fails_at_budget() {
    let env = enclosed_env();
    for kind in PlannerKind::ALL {
        let cfg = config(kind, &env, 3_000, 0);
        let r = run_planner(&env, &cfg).unwrap();
        assert!(r.failed, "{kind}");
        assert_eq!(r.total_iterations, 3_000);
        assert!(r.best_path.is_none() && r.best_cost.is_none());
        assert!(r.cost_trace.is_empty());
    }
}

#[test]
fn identical_seeds_give_identical_results() {
    let env = cluttered_env();
    for kind in PlannerKind::ALL {
        let cfg = config(kind, &env, 3_000, 11);
        let a = run_planner(&env, &cfg).unwrap();
        let b = run_planner(&env, &cfg).unwrap();
        assert_eq!(a.without_wall_time(), b.without_wall_time(), "{kind}");
        check_result(&env, &cfg, &a);
    }
}

#[test]
fn different_seeds_differ() {
    let env = cluttered_env();
    let a = run_planner(&env, &config(PlannerKind::IbRrtStar, &env, 500, 1)).unwrap();
    let b = run_planner(&env, &config(PlannerKind::IbRrtStar, &env, 500, 2)).unwrap();
    assert_ne!(a.without_wall_time(), b.without_wall_time());
}

struct Auditor<'a> {
    env: &'a Environment,
    resolution: f64,
    checked: u64,
}

impl PlannerObserver for Auditor<'_> {
    fn iteration_end(&mut self, iteration: u64, trees: &[MotionTree]) {
        for t in trees {
            let violations = t.audit(self.env, self.resolution);
            assert!(
                violations.is_empty(),
                "iteration {iteration}: {violations:?}"
            );
        }
        self.checked += 1;
    }
}

#[test]
fn trees_pass_audit_every_iteration() {
    let env = cluttered_env();
    for kind in PlannerKind::ALL {
        let cfg = config(kind, &env, 400, 5);
        let mut auditor = Auditor {
            env: &env,
            resolution: cfg.collision_resolution,
            checked: 0,
        };
        let run = run_planner_with(&env, &cfg, &mut auditor).unwrap();
        assert_eq!(auditor.checked, 400);
        assert_eq!(run.trees.len(), if kind.is_bidirectional() { 2 } else { 1 });
        assert_eq!(run.trees[0].root(), env.start());
        if kind.is_bidirectional() {
            assert_eq!(run.trees[1].root(), env.goal());
        }
        let sizes: Vec<_> = run.trees.iter().map(MotionTree::len).collect();
        assert_eq!(sizes, run.result.tree_sizes);
    }
}

#[test]
fn solutions_on_cluttered_scenario_are_valid() {
    let env = cluttered_env();
    for kind in PlannerKind::ALL {
        for seed in 0..3 {
            let cfg = config(kind, &env, 5_000, seed);
            let r = run_planner(&env, &cfg).unwrap();
            check_result(&env, &cfg, &r);
            assert!(!r.failed, "{kind} seed {seed}");
            let path = r.best_path.unwrap();
            assert_eq!(&path[0], env.start());
            assert!(env.in_goal_region(path.last().unwrap()));
        }
    }
}

#[test]
fn stop_on_first_and_target_cost() {
    let env = open_env();
    for kind in PlannerKind::ALL {
        let mut cfg = config(kind, &env, 20_000, 3);
        cfg.stop_on_first = true;
        let r = run_planner(&env, &cfg).unwrap();
        assert_eq!(
            Some(r.total_iterations),
            r.first_solution_iteration,
            "{kind}"
        );

        let mut cfg = config(kind, &env, 20_000, 3);
        cfg.target_cost = Some(10.5);
        let r = run_planner(&env, &cfg).unwrap();
        assert_eq!(Some(r.total_iterations), r.target_iteration, "{kind}");
        assert!(r.best_cost.unwrap() <= 10.5);
        assert!(r.target_time.is_some());
    }
}

#[test]
fn active_root_schedule_only_affects_swapping_planners() {
    let env = cluttered_env();
    let a = config(PlannerKind::PibRrtStar, &env, 2_000, 4);
    let mut b = a.clone();
    b.pole_schedule = PoleSchedule::ActiveRoot;
    let ra = run_planner(&env, &a).unwrap();
    let rb = run_planner(&env, &b).unwrap();
    assert_eq!(ra.without_wall_time(), rb.without_wall_time());

    let a = config(PlannerKind::PbRrtStar, &env, 2_000, 4);
    let mut b = a.clone();
    b.pole_schedule = PoleSchedule::ActiveRoot;
    let ra = run_planner(&env, &a).unwrap();
    let rb = run_planner(&env, &b).unwrap();
    assert_ne!(ra.without_wall_time(), rb.without_wall_time());
    check_result(&env, &b, &rb);
}

#[test]
fn guidance_pulls_samples_toward_alternating_poles() {
    struct Poles(Vec<(u64, f64, f64)>, ConfigPoint, ConfigPoint);
    impl PlannerObserver for Poles {
        fn sampled(&mut self, it: u64, raw: &ConfigPoint, guided: &ConfigPoint, _: &[MotionTree]) {
            let to_goal = raw.dist(&self.2) - guided.dist(&self.2);
            let to_start = raw.dist(&self.1) - guided.dist(&self.1);
            self.0.push((it, to_goal, to_start));
        }
    }
    let env = open_env();
    let cfg = config(PlannerKind::PibRrtStar, &env, 200, 0);
    let mut poles = Poles(Vec::new(), env.start().clone(), env.goal().clone());
    run_planner_with(&env, &cfg, &mut poles).unwrap();
    for (it, to_goal, to_start) in poles.0 {
        // iteration `it` has loop index it - 1
        if (it - 1) % 2 == 0 {
            assert!(to_goal >= 0.0);
        } else {
            assert!(to_start >= 0.0);
        }
    }
}

#[test]
fn start_inside_goal_region_is_immediate() {
    let env = Environment::new(
        Bounds::new([0.0, 0.0], [4.0, 4.0]),
        vec![],
        [1.0, 1.0],
        [1.2, 1.0],
        0.5,
    )
    .unwrap();
    let r = run_planner(&env, &config(PlannerKind::RrtStar, &env, 10, 0)).unwrap();
    assert_eq!(r.first_solution_iteration, Some(0));
    assert!((r.best_cost.unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn three_dimensional_runs() {
    let env = Environment::new(
        Bounds::new([0.0, 0.0, 0.0], [10.0, 10.0, 10.0]),
        vec![Obstacle::new_box([4.0, 0.0, 0.0], [6.0, 10.0, 7.0])],
        [1.0, 5.0, 1.0],
        [9.0, 5.0, 1.0],
        0.5,
    )
    .unwrap();
    for kind in PlannerKind::ALL {
        let cfg = config(kind, &env, 4_000, 2);
        let r = run_planner(&env, &cfg).unwrap();
        check_result(&env, &cfg, &r);
        assert!(!r.failed, "{kind}");
        // over the wall: 2 * sqrt(3^2 + 6^2) + 2, less the goal radius
        assert!(r.best_cost.unwrap() >= 2.0 * 45f64.sqrt() + 2.0 - 0.5 - 1e-9);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let env = open_env();
    let good = config(PlannerKind::PibRrtStar, &env, 10, 0);
    let mutations: Vec<Box<dyn Fn(&mut PlannerConfig)>> = vec![
        Box::new(|c| c.gamma = 0.0),
        Box::new(|c| c.eps_steer = -1.0),
        Box::new(|c| c.max_iterations = 0),
        Box::new(|c| c.cost_trace_stride = 0),
        Box::new(|c| c.collision_resolution = f64::NAN),
        Box::new(|c| c.potential.eps_pot = 0.0),
        Box::new(|c| c.log_base = 1.0),
        Box::new(|c| c.target_cost = Some(-1.0)),
    ];
    for m in mutations {
        let mut cfg = good.clone();
        m(&mut cfg);
        assert!(matches!(
            run_planner(&env, &cfg),
            Err(PlanError::InvalidArgument(_))
        ));
    }
    // potential parameters only matter to guided planners
    let mut cfg = config(PlannerKind::RrtStar, &env, 10, 0);
    cfg.potential.eps_pot = 0.0;
    assert!(run_planner(&env, &cfg).is_ok());
}

#[test]
fn kind_names_round_trip() {
    for kind in PlannerKind::ALL {
        assert_eq!(kind.name().parse::<PlannerKind>().unwrap(), kind);
        let json = serde_json::to_string(&kind).unwrap();
        assert_eq!(json, format!("\"{}\"", kind.name()));
    }
    assert!("rrt".parse::<PlannerKind>().is_err());
}

#[test]
fn result_json_round_trip() {
    let env = cluttered_env();
    let cfg = config(PlannerKind::PbRrtStar, &env, 1_000, 0);
    let r = run_planner(&env, &cfg).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: RunResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    let cfg_json = serde_json::to_string(&cfg).unwrap();
    assert_eq!(
        serde_json::from_str::<PlannerConfig>(&cfg_json).unwrap(),
        cfg
    );
}
