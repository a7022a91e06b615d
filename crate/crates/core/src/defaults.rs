//! The numeric defaults table.
//!
//! Every tunable that is not given on the command line comes from here. The
//! table can be replaced wholesale or in part by a TOML file named in the
//! `PGBRRT_DEFAULTS` environment variable; missing keys keep their built-in
//! values.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{PlanError, Result};
use crate::planner::{PlannerConfig, PlannerKind, PoleSchedule};
use crate::potential::PotentialParams;

pub const DEFAULTS_ENV_VAR: &str = "PGBRRT_DEFAULTS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Defaults {
    pub seed: u64,
    pub max_iterations: u64,
    /// Iterations after which a benchmark run counts as failed.
    pub failure_cap: u64,
    pub runs_per_cell: usize,
    pub seed_base: u64,
    /// Relative slack over the reference cost that counts as optimal.
    pub optimal_tolerance: f64,
    /// `gamma = gamma_scale * measure(Z_free)^(1/d)`.
    pub gamma_scale: f64,
    pub measure_samples: u64,
    /// Seed of the sampling used for free-space measure and clearance
    /// estimates, independent of the run seed.
    pub estimate_seed: u64,
    /// Fraction of the bounds diagonal.
    pub eps_steer_fraction: f64,
    /// Fraction of the bounds diagonal.
    pub collision_resolution_fraction: f64,
    pub log_base: f64,
    pub k_p: f64,
    pub n_steps: u32,
    /// `eps_pot` as a fraction of the mean obstacle clearance of free samples.
    pub eps_pot_clearance_fraction: f64,
    /// `eps_pot` as a fraction of the diagonal when there are no obstacles.
    pub eps_pot_open_fraction: f64,
    pub clearance_samples: u64,
    /// Fraction of the bounds diagonal.
    pub d_obs_fraction: f64,
    pub goal_radius: f64,
    pub cost_trace_stride: u64,
    pub rejection_cap: u64,
    pub pole_schedule: PoleSchedule,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            seed: 0,
            max_iterations: 200_000,
            failure_cap: 5_000_000,
            runs_per_cell: 50,
            seed_base: 0,
            optimal_tolerance: 0.05,
            gamma_scale: 2.0,
            measure_samples: 100_000,
            estimate_seed: 0,
            eps_steer_fraction: 0.05,
            collision_resolution_fraction: 1e-3,
            log_base: std::f64::consts::E,
            k_p: 1.0,
            n_steps: 10,
            eps_pot_clearance_fraction: 0.1,
            eps_pot_open_fraction: 0.01,
            clearance_samples: 1000,
            d_obs_fraction: 5e-4,
            goal_radius: crate::environment::DEFAULT_GOAL_RADIUS,
            cost_trace_stride: 100,
            rejection_cap: crate::environment::DEFAULT_REJECTION_CAP,
            pole_schedule: PoleSchedule::Iteration,
        }
    }
}

impl Defaults {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| PlanError::Parse(format!("defaults table: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("defaults serialize")
    }

    pub fn load_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PlanError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Built-in table, or the file named by `PGBRRT_DEFAULTS` when set.
    pub fn load() -> Result<Self> {
        match std::env::var_os(DEFAULTS_ENV_VAR) {
            Some(p) if !p.is_empty() => Self::load_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    /// Default `gamma` for `env`.
    pub fn gamma(&self, env: &Environment) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.estimate_seed);
        let measure = env.free_measure_estimate(self.measure_samples, &mut rng);
        self.gamma_scale * measure.powf(1.0 / env.dim() as f64)
    }

    /// Default descent step for `env`.
    pub fn eps_pot(&self, env: &Environment) -> Result<f64> {
        let diagonal = env.bounds().diagonal();
        if env.obstacles().is_empty() {
            return Ok(self.eps_pot_open_fraction * diagonal);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.estimate_seed);
        let n = self.clearance_samples.max(1);
        let mut total = 0.0;
        for _ in 0..n {
            let z = env.sample_free(&mut rng)?;
            total += env.nearest_obstacle_distance_unchecked(&z);
        }
        Ok(self.eps_pot_clearance_fraction * total / n as f64)
    }

    /// Fully resolved configuration for running `kind` on `env`.
    pub fn planner_config(
        &self,
        kind: PlannerKind,
        env: &Environment,
        seed: u64,
    ) -> Result<PlannerConfig> {
        let diagonal = env.bounds().diagonal();
        let cfg = PlannerConfig {
            kind,
            gamma: self.gamma(env),
            eps_steer: self.eps_steer_fraction * diagonal,
            collision_resolution: self.collision_resolution_fraction * diagonal,
            max_iterations: self.max_iterations,
            seed,
            potential: PotentialParams {
                k_p: self.k_p,
                eps_pot: self.eps_pot(env)?,
                n_steps: self.n_steps,
                d_obs_star: self.d_obs_fraction * diagonal,
            },
            stop_on_first: false,
            cost_trace_stride: self.cost_trace_stride,
            target_cost: None,
            max_radius: diagonal,
            log_base: self.log_base,
            pole_schedule: self.pole_schedule,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Per-run settings that replace values resolved from the table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigOverrides {
    pub gamma: Option<f64>,
    pub eps_steer: Option<f64>,
    pub collision_resolution: Option<f64>,
    pub max_iterations: Option<u64>,
    pub k_p: Option<f64>,
    pub eps_pot: Option<f64>,
    pub n_steps: Option<u32>,
    pub d_obs_star: Option<f64>,
    pub stop_on_first: Option<bool>,
    pub cost_trace_stride: Option<u64>,
    pub pole_schedule: Option<PoleSchedule>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut PlannerConfig) {
        fn set<T: Copy>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        set(&mut cfg.gamma, self.gamma);
        set(&mut cfg.eps_steer, self.eps_steer);
        set(&mut cfg.collision_resolution, self.collision_resolution);
        set(&mut cfg.max_iterations, self.max_iterations);
        set(&mut cfg.potential.k_p, self.k_p);
        set(&mut cfg.potential.eps_pot, self.eps_pot);
        set(&mut cfg.potential.n_steps, self.n_steps);
        set(&mut cfg.potential.d_obs_star, self.d_obs_star);
        set(&mut cfg.stop_on_first, self.stop_on_first);
        set(&mut cfg.cost_trace_stride, self.cost_trace_stride);
        set(&mut cfg.pole_schedule, self.pole_schedule);
    }
}

impl Defaults {
    /// [`planner_config`](Self::planner_config) with `overrides` applied and
    /// the result validated again.
    pub fn resolve(
        &self,
        kind: PlannerKind,
        env: &Environment,
        seed: u64,
        overrides: &ConfigOverrides,
    ) -> Result<PlannerConfig> {
        let mut cfg = self.planner_config(kind, env, seed)?;
        overrides.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}
