//! Attractive-potential guidance of random samples.
//!
//! Only the quadratic attractive potential `U = k_p/2 * |z - pole|^2` is
//! evaluated. Instead of a repulsive term, descent halts as soon as the
//! sample comes within `d_obs_star` of an obstacle, which leaves guided
//! samples hugging obstacle boundaries.

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Attractive gain. The descent step is normalised, so the gain only
    /// scales the reported force.
    pub k_p: f64,
    /// Length of one descent step.
    pub eps_pot: f64,
    /// Maximum number of descent steps.
    pub n_steps: u32,
    /// Obstacle clearance at which descent stops.
    pub d_obs_star: f64,
}

impl PotentialParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            PlanError::InvalidArgument(format!("{what} must be positive and finite, got {v}"))
        };
        if !(self.k_p.is_finite() && self.k_p > 0.0) {
            return Err(bad("k_p", self.k_p));
        }
        if !(self.eps_pot.is_finite() && self.eps_pot > 0.0) {
            return Err(bad("eps_pot", self.eps_pot));
        }
        if !(self.d_obs_star.is_finite() && self.d_obs_star > 0.0) {
            return Err(bad("d_obs_star", self.d_obs_star));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleKind {
    Init,
    Goal,
}

impl PoleKind {
    pub fn point(self, env: &Environment) -> &ConfigPoint {
        match self {
            PoleKind::Init => env.start(),
            PoleKind::Goal => env.goal(),
        }
    }

    pub fn opposite(self) -> PoleKind {
        match self {
            PoleKind::Init => PoleKind::Goal,
            PoleKind::Goal => PoleKind::Init,
        }
    }
}

/// `k_p/2 * |z - pole|^2`
pub fn attractive_potential(z: &ConfigPoint, pole: &ConfigPoint, k_p: f64) -> f64 {
    0.5 * k_p * z.dist_sq(pole)
}

/// Negative gradient of [`attractive_potential`]: `-k_p (z - pole)`.
pub fn attractive_force(z: &ConfigPoint, pole: &ConfigPoint, k_p: f64) -> ConfigPoint {
    z.sub(pole).scale(-k_p)
}

/// Walks `z` toward `pole` in unit-force steps of `eps_pot`.
///
/// Stops early when the clearance drops to `d_obs_star`, when the next
/// step would leave free space, or on reaching the pole. The last step is
/// clamped onto the pole instead of overshooting it.
pub fn descend(
    z: &ConfigPoint,
    pole: &ConfigPoint,
    params: &PotentialParams,
    env: &Environment,
) -> ConfigPoint {
    let mut cur = z.clone();
    for _ in 0..params.n_steps {
        let force = attractive_force(&cur, pole, params.k_p);
        let magnitude = force.norm();
        if magnitude == 0.0 {
            break;
        }
        if env.nearest_obstacle_distance_unchecked(&cur) <= params.d_obs_star {
            break;
        }
        let next = if cur.dist(pole) <= params.eps_pot {
            pole.clone()
        } else {
            cur.add_scaled(&force, params.eps_pot / magnitude)
        };
        if !env.is_free_unchecked(&next) {
            break;
        }
        cur = next;
    }
    cur
}

/// Single-pole guidance toward the goal.
pub fn rgd(z_rand: &ConfigPoint, params: &PotentialParams, env: &Environment) -> ConfigPoint {
    descend(z_rand, env.goal(), params, env)
}

/// Pole used by the bidirectional heuristic at iteration `i`: goal on even
/// iterations, start on odd ones.
pub fn bpg_pole(i: u64) -> PoleKind {
    if i.is_multiple_of(2) {
        PoleKind::Goal
    } else {
        PoleKind::Init
    }
}

/// Bidirectional potential guidance: descend toward the pole selected by the
/// parity of `i`.
pub fn bpg(
    z_rand: &ConfigPoint,
    i: u64,
    params: &PotentialParams,
    env: &Environment,
) -> ConfigPoint {
    descend(z_rand, bpg_pole(i).point(env), params, env)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::environment::{Bounds, Obstacle};

    fn params(n_steps: u32) -> PotentialParams {
        PotentialParams {
            k_p: 1.0,
            eps_pot: 0.1,
            n_steps,
            d_obs_star: 0.01,
        }
    }

    fn open() -> Environment {
        Environment::new(
            Bounds::new([0.0, 0.0], [10.0, 10.0]),
            vec![],
            [1.0, 5.0],
            [9.0, 5.0],
            0.5,
        )
        .unwrap()
    }

    fn cluttered() -> Environment {
        Environment::new(
            Bounds::new([0.0, 0.0], [10.0, 10.0]),
            vec![
                Obstacle::new_box([3.0, 3.0], [4.0, 7.0]),
                Obstacle::new_box([6.0, 0.0], [7.0, 4.0]),
                Obstacle::new_sphere([6.5, 7.5], 1.0),
                Obstacle::new_box([1.0, 7.5], [2.5, 9.0]),
            ],
            [1.0, 5.0],
            [9.0, 5.0],
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn force_cases() {
        let pole = ConfigPoint::from([0.0, 0.0]);
        assert_eq!(
            attractive_force(&pole, &pole, 1.0),
            ConfigPoint::from([0.0, 0.0])
        );
        let f = attractive_force(&ConfigPoint::from([3.0, 4.0]), &pole, 1.0);
        assert_eq!(f, ConfigPoint::from([-3.0, -4.0]));
        assert_eq!(f.norm(), 5.0);
        let a = attractive_force(&ConfigPoint::from([1.0, 0.0]), &pole, 2.5);
        let b = attractive_force(&ConfigPoint::from([-1.0, 0.0]), &pole, 2.5);
        assert_eq!(a, b.scale(-1.0));
    }

    fn fd_gradient(z: &ConfigPoint, pole: &ConfigPoint, k_p: f64, h: f64) -> Vec<f64> {
        (0..z.dim())
            .map(|i| {
                let mut plus = z.coords().to_vec();
                let mut minus = z.coords().to_vec();
                plus[i] += h;
                minus[i] -= h;
                let up = attractive_potential(&ConfigPoint::new(plus), pole, k_p);
                let um = attractive_potential(&ConfigPoint::new(minus), pole, k_p);
                (up - um) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn force_is_negative_fd_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let d = rng.gen_range(2..=3);
            let z = ConfigPoint::new((0..d).map(|_| rng.gen_range(-10.0..10.0)));
            let pole = ConfigPoint::new((0..d).map(|_| rng.gen_range(-10.0..10.0)));
            let k_p = rng.gen_range(0.1..5.0);
            let f = attractive_force(&z, &pole, k_p);
            let g = fd_gradient(&z, &pole, k_p, 1e-5);
            let err: f64 = f
                .coords()
                .iter()
                .zip(&g)
                .map(|(a, b)| (a + b) * (a + b))
                .sum::<f64>()
                .sqrt();
            assert!(err / f.norm() <= 1e-6, "relative error {}", err / f.norm());
        }
    }

    #[test]
    fn descend_stops_immediately_near_obstacle() {
        let env = cluttered();
        let z = ConfigPoint::from([2.995, 5.0]);
        let p = PotentialParams {
            d_obs_star: 0.01,
            ..params(10)
        };
        assert_eq!(descend(&z, env.goal(), &p, &env), z);
    }

    #[test]
    fn descend_walks_straight_in_open_space() {
        let env = open();
        let z = ConfigPoint::from([2.0, 2.0]);
        let pole = env.goal().clone();
        let p = params(10);
        let out = descend(&z, &pole, &p, &env);
        // n-step straight-line simulation
        let dir = pole.sub(&z).scale(1.0 / z.dist(&pole));
        let expected = z.add_scaled(&dir, 10.0 * p.eps_pot);
        assert!(out.dist(&expected) < 1e-12);
        assert!((z.dist(&pole) - out.dist(&pole) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn descend_clamps_onto_pole() {
        let env = open();
        let pole = env.goal().clone();
        let z = ConfigPoint::from([8.95, 5.0]);
        assert_eq!(descend(&z, &pole, &params(10), &env), pole);
    }

    #[test]
    fn rgd_cases() {
        let env = open();
        assert_eq!(rgd(env.goal(), &params(10), &env), *env.goal());
        let z = ConfigPoint::from([3.0, 3.0]);
        assert_eq!(rgd(&z, &params(0), &env), z);
    }

    #[test]
    fn rgd_pulls_samples_toward_goal_in_clutter() {
        let env = cluttered();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = params(10);
        let (mut before, mut after) = (0.0, 0.0);
        for _ in 0..1000 {
            let z = env.sample_free(&mut rng).unwrap();
            before += z.dist(env.goal());
            after += rgd(&z, &p, &env).dist(env.goal());
        }
        assert!(after < before);
    }

    #[test]
    fn bpg_alternates_poles() {
        let env = open();
        let p = params(10);
        let z = ConfigPoint::from([5.0, 5.0]);
        let even = bpg(&z, 4, &p, &env);
        let odd = bpg(&z, 5, &p, &env);
        let step = (p.n_steps as f64 * p.eps_pot).min(z.dist(env.goal()));
        assert!((z.dist(env.goal()) - even.dist(env.goal()) - step).abs() < 1e-12);
        assert!((z.dist(env.start()) - odd.dist(env.start()) - step).abs() < 1e-12);
        // on the init-goal axis the two moves are opposite
        let a = even.sub(&z);
        let b = odd.sub(&z);
        assert!((a[0] + b[0]).abs() < 1e-12 && a[1] == 0.0 && b[1] == 0.0);
        assert!(a[0] > 0.0);
    }

    #[test]
    fn displacement_grows_with_step_budget() {
        let env = open();
        let mut last = -1.0;
        for n in [0, 1, 2, 5, 10, 20, 50, 100] {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let mut total = 0.0;
            for i in 0..500u64 {
                let z = env.sample_free(&mut rng).unwrap();
                total += bpg(&z, i, &params(n), &env).dist(&z);
            }
            let mean = total / 500.0;
            if n == 0 {
                assert_eq!(mean, 0.0);
            }
            assert!(mean >= last);
            last = mean;
        }
    }

    fn free_point() -> impl Strategy<Value = ConfigPoint> {
        (0.0..10.0f64, 0.0..10.0f64)
            .prop_map(|(x, y)| ConfigPoint::from([x, y]))
            .prop_filter("free", |z| cluttered().is_free(z).unwrap())
    }

    proptest! {
        #[test]
        fn descend_stays_free_and_approaches(z in free_point(), goal_pole in any::<bool>(), n in 0u32..60, eps in 0.01..1.5f64) {
            let env = cluttered();
            let pole = if goal_pole { env.goal() } else { env.start() };
            let p = PotentialParams { eps_pot: eps, ..params(n) };
            let out = descend(&z, pole, &p, &env);
            prop_assert!(env.is_free(&out).unwrap());
            prop_assert!(out.dist(pole) <= z.dist(pole));
            prop_assert_eq!(out.clone(), descend(&z, pole, &p, &env));
        }
    }
}
