use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn unit_square(obstacles: Vec<Obstacle>) -> Environment {
    Environment::new(
        Bounds::new([0.0, 0.0], [1.0, 1.0]),
        obstacles,
        [0.9, 0.9],
        [0.95, 0.95],
        0.01,
    )
    .unwrap()
}

fn mixed_env() -> Environment {
    Environment::new(
        Bounds::new([-5.0, -5.0], [5.0, 5.0]),
        vec![
            Obstacle::new_box([2.0, -1.0], [3.0, 1.0]),
            Obstacle::new_sphere([-2.0, 2.0], 1.0),
            Obstacle::new_box([-3.0, -4.0], [-1.0, -2.5]),
        ],
        [0.0, 0.0],
        [4.0, 4.0],
        0.5,
    )
    .unwrap()
}

#[test]
fn empty_environment_point_is_free() {
    let env = unit_square(vec![]);
    assert!(env.is_free(&ConfigPoint::from([0.3, 0.4])).unwrap());
    assert!(!env.is_free(&ConfigPoint::from([1.3, 0.4])).unwrap());
}

#[test]
fn obstacle_center_and_face_are_occupied() {
    let env = unit_square(vec![Obstacle::new_box([0.2, 0.2], [0.4, 0.6])]);
    let center = ConfigPoint::from([0.3, 0.4]);
    assert!(!env.is_free(&center).unwrap());
    let face = ConfigPoint::from([0.2, 0.5]);
    assert!(!env.is_free(&face).unwrap());
    assert_eq!(env.nearest_obstacle_distance(&face).unwrap(), 0.0);
}

#[test]
fn dimension_mismatch_is_rejected() {
    let env = unit_square(vec![]);
    let z = ConfigPoint::from([0.1, 0.1, 0.1]);
    assert!(matches!(
        env.is_free(&z),
        Err(PlanError::DimensionMismatch {
            expected: 2,
            found: 3
        })
    ));
    assert!(env.nearest_obstacle_distance(&z).is_err());
}

#[test]
fn sample_free_is_deterministic_per_seed() {
    let env = unit_square(vec![]);
    let a = env.sample_free(&mut ChaCha8Rng::seed_from_u64(42)).unwrap();
    let b = env.sample_free(&mut ChaCha8Rng::seed_from_u64(42)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sample_free_in_nearly_covered_environment() {
    // 99% of the square covered by one box.
    let env = Environment::new(
        Bounds::new([0.0, 0.0], [1.0, 1.0]),
        vec![Obstacle::new_box([0.0, 0.0], [1.0, 0.99])],
        [0.5, 0.995],
        [0.1, 0.995],
        0.001,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let z = env.sample_free(&mut rng).unwrap();
        assert!(env.is_free(&z).unwrap());
    }
}

#[test]
fn sample_free_reports_degenerate_environment() {
    let env = Environment::new(
        Bounds::new([0.0, 0.0], [1.0, 1.0]),
        vec![Obstacle::new_box([0.0, 0.0], [1.0, 0.999_999])],
        [0.5, 1.0],
        [0.1, 1.0],
        0.001,
    )
    .unwrap()
    .with_rejection_cap(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(matches!(
        env.sample_free(&mut rng),
        Err(PlanError::DegenerateEnvironment { attempts: 1000 })
    ));
}

#[test]
fn sample_free_quadrant_fractions() {
    // Lower-left quadrant blocked; the remaining three quadrants have
    // equal area, so each should receive a third of the samples.
    let env = unit_square(vec![Obstacle::new_box([0.0, 0.0], [0.5, 0.5])]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 100_000;
    let mut counts = [0usize; 3];
    for _ in 0..n {
        let z = env.sample_free(&mut rng).unwrap();
        let q = match (z[0] > 0.5, z[1] > 0.5) {
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (false, false) => panic!("sample inside the obstacle: {z:?}"),
        };
        counts[q] += 1;
    }
    for c in counts {
        let frac = c as f64 / n as f64;
        assert!((frac - 1.0 / 3.0).abs() <= 0.02, "fraction {frac}");
    }
}

#[test]
fn nearest_obstacle_distance_cases() {
    let env = unit_square(vec![]);
    assert_eq!(
        env.nearest_obstacle_distance(&ConfigPoint::from([0.5, 0.5]))
            .unwrap(),
        f64::INFINITY
    );

    let env = mixed_env();
    assert_eq!(
        env.nearest_obstacle_distance(&ConfigPoint::from([2.5, 0.5]))
            .unwrap(),
        0.0
    );
}

#[test]
fn nearest_obstacle_distance_matches_boundary_sampling() {
    let env = Environment::new(
        Bounds::new([-5.0, -5.0], [5.0, 5.0]),
        vec![Obstacle::new_box([2.0, -1.0], [3.0, 1.0])],
        [0.0, 0.0],
        [4.0, 4.0],
        0.5,
    )
    .unwrap();
    let z = [0.0, 0.0];
    // dense sampling of the box perimeter
    let n = 200_000;
    let mut best = f64::INFINITY;
    for k in 0..=n {
        let t = k as f64 / n as f64;
        for p in [
            [2.0 + t, -1.0],
            [2.0 + t, 1.0],
            [2.0, -1.0 + 2.0 * t],
            [3.0, -1.0 + 2.0 * t],
        ] {
            best = best.min(crate::point::dist_sq(&p, &z).sqrt());
        }
    }
    let d = env
        .nearest_obstacle_distance(&ConfigPoint::from(z))
        .unwrap();
    assert!((d - best).abs() <= 1e-6);
    assert!((d - 2.0).abs() <= 1e-12);
}

#[test]
fn segment_free_cases() {
    let env = mixed_env();
    let a = ConfigPoint::from([0.0, 0.0]);
    assert!(env.segment_free(&a, &a, 0.01));

    // crosses the face x = 2 of the first box at y = 0
    let b = ConfigPoint::from([4.0, 0.0]);
    assert!(!env.segment_free(&a, &b, 0.01));
    // same segment sampled finely: the slab answer agrees with sampling
    assert!(dense_hit(&env, &a, &b, 1e-4));

    // passes just above the box
    let c = ConfigPoint::from([4.0, 1.0 + 1e-9]);
    let a2 = ConfigPoint::from([0.0, 1.0 + 1e-9]);
    assert!(env.segment_free(&a2, &c, 0.01));
    assert!(!dense_hit(&env, &a2, &c, 1e-4));
}

#[test]
fn segment_tangent_to_sphere_is_blocked() {
    let env = mixed_env();
    // sphere centre (-2, 2), radius 1: the line y = 3 touches it at (-2, 3)
    let a = ConfigPoint::from([-4.0, 3.0]);
    let b = ConfigPoint::from([0.0, 3.0]);
    assert!(!env.segment_free(&a, &b, 0.01));
    let a = ConfigPoint::from([-4.0, 3.0 + 1e-9]);
    let b = ConfigPoint::from([0.0, 3.0 + 1e-9]);
    assert!(env.segment_free(&a, &b, 0.01));
}

fn dense_hit(env: &Environment, a: &ConfigPoint, b: &ConfigPoint, step: f64) -> bool {
    let n = (a.dist(b) / step).ceil() as usize;
    (0..=n).any(|k| !env.is_free_unchecked(&a.lerp(b, k as f64 / n.max(1) as f64)))
}

#[test]
fn free_measure_estimates() {
    let env = unit_square(vec![]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert_eq!(env.free_measure_estimate(100_000, &mut rng), 1.0);

    let env = unit_square(vec![Obstacle::new_box([0.0, 0.0], [0.5, 0.5])]);
    let est = env.free_measure_estimate(100_000, &mut rng);
    assert!((est - 0.75).abs() <= 0.01, "estimate {est}");

    for seed in 0..20 {
        let est = env.free_measure_estimate(1, &mut ChaCha8Rng::seed_from_u64(seed));
        assert!(est == 0.0 || est == 1.0);
    }
}

const SCENARIO: &str = r#"{
  "name": "demo",
  "dimension": 2,
  "bounds": {"min": [0, 0], "max": [10, 10]},
  "obstacles": [
    {"type": "box", "min": [4, 0], "max": [6, 4.5]},
    {"type": "sphere", "center": [2, 7], "radius": 1}
  ],
  "start": [1, 1],
  "goal": [9, 1],
  "reference_cost": 12.5
}"#;

#[test]
fn scenario_round_trip_is_canonical() {
    let env = Environment::load_scenario(SCENARIO).unwrap();
    assert_eq!(env.goal_radius(), DEFAULT_GOAL_RADIUS);
    assert_eq!(env.reference_cost(), Some(12.5));
    let normalized = ScenarioDocument::parse(SCENARIO).unwrap().to_json();
    assert_eq!(env.to_scenario_json(), normalized);
    let again = Environment::load_scenario(&normalized).unwrap();
    assert_eq!(again, env);
    assert_eq!(again.to_scenario_json(), normalized);
}

#[test]
fn scenario_start_inside_obstacle_is_rejected() {
    let doc = SCENARIO.replace(r#""start": [1, 1]"#, r#""start": [5, 1]"#);
    match Environment::load_scenario(&doc) {
        Err(PlanError::Validation(msg)) => assert!(msg.contains("start"), "{msg}"),
        other => panic!("expected validation error, got {other:?}"),
    }
}

#[test]
fn scenario_dimension_mismatch_is_rejected() {
    let doc = r#"{
      "dimension": 3,
      "bounds": {"min": [0, 0, 0], "max": [10, 10, 10]},
      "obstacles": [{"type": "box", "min": [4, 0], "max": [6, 4.5]}],
      "start": [1, 1, 1],
      "goal": [9, 1, 1]
    }"#;
    match Environment::load_scenario(doc) {
        Err(PlanError::Validation(msg)) => assert!(msg.contains("dimension mismatch"), "{msg}"),
        other => panic!("expected dimension mismatch, got {other:?}"),
    }
}

#[test]
fn scenario_parse_and_validation_errors() {
    assert!(matches!(
        Environment::load_scenario("{ not json"),
        Err(PlanError::Parse(_))
    ));
    let doc = SCENARIO.replace(r#""reference_cost": 12.5"#, r#""goal_radius": 0"#);
    assert!(matches!(
        Environment::load_scenario(&doc),
        Err(PlanError::Validation(_))
    ));
}

fn coord() -> impl Strategy<Value = f64> {
    -6.0..6.0f64
}

fn point() -> impl Strategy<Value = ConfigPoint> {
    (coord(), coord()).prop_map(|(x, y)| ConfigPoint::from([x, y]))
}

proptest! {
    #[test]
    fn free_iff_positive_clearance_in_bounds(z in point()) {
        let env = mixed_env();
        let free = env.is_free(&z).unwrap();
        let d = env.nearest_obstacle_distance(&z).unwrap();
        prop_assert_eq!(free, d > 0.0 && env.bounds().contains(z.coords()));
    }

    #[test]
    fn segment_free_implies_free_endpoints_and_is_symmetric(a in point(), b in point()) {
        let env = mixed_env();
        let ab = env.segment_free(&a, &b, 0.01);
        prop_assert_eq!(ab, env.segment_free(&b, &a, 0.01));
        if ab {
            prop_assert!(env.is_free(&a).unwrap() && env.is_free(&b).unwrap());
        }
    }

    #[test]
    fn clearance_is_one_lipschitz(a in point(), b in point()) {
        let env = mixed_env();
        let fa = env.nearest_obstacle_distance(&a).unwrap();
        let fb = env.nearest_obstacle_distance(&b).unwrap();
        prop_assert!((fa - fb).abs() <= a.dist(&b) + 1e-12);
    }

    #[test]
    fn equal_seeds_give_identical_sample_streams(seed in any::<u64>()) {
        let env = mixed_env();
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let a = env.sample_free(&mut r1).unwrap();
            let b = env.sample_free(&mut r2).unwrap();
            prop_assert!(a.coords().iter().zip(b.coords()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}
