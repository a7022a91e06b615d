//! The six planner loops and their run bookkeeping.

mod bidirectional;
pub mod ops;
mod recorder;
mod unidirectional;

#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;
use crate::potential::PotentialParams;
use crate::tree::{MotionTree, NearRadius};

pub use ops::{
    concatenate_solution, connect, extend, get_best_tree_parent, steer, Bridge, Link, Side,
    TreeParent,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlannerKind {
    RrtStar,
    PRrtStar,
    BRrtStar,
    IbRrtStar,
    PbRrtStar,
    PibRrtStar,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 6] = [
        PlannerKind::RrtStar,
        PlannerKind::PRrtStar,
        PlannerKind::BRrtStar,
        PlannerKind::IbRrtStar,
        PlannerKind::PbRrtStar,
        PlannerKind::PibRrtStar,
    ];

    /// Command-line name, e.g. `pib-rrt-star`.
    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::RrtStar => "rrt-star",
            PlannerKind::PRrtStar => "p-rrt-star",
            PlannerKind::BRrtStar => "b-rrt-star",
            PlannerKind::IbRrtStar => "ib-rrt-star",
            PlannerKind::PbRrtStar => "pb-rrt-star",
            PlannerKind::PibRrtStar => "pib-rrt-star",
        }
    }

    /// Conventional acronym, e.g. `PIB-RRT*`.
    pub fn label(self) -> &'static str {
        match self {
            PlannerKind::RrtStar => "RRT*",
            PlannerKind::PRrtStar => "P-RRT*",
            PlannerKind::BRrtStar => "B-RRT*",
            PlannerKind::IbRrtStar => "IB-RRT*",
            PlannerKind::PbRrtStar => "PB-RRT*",
            PlannerKind::PibRrtStar => "PIB-RRT*",
        }
    }

    pub fn is_guided(self) -> bool {
        matches!(
            self,
            PlannerKind::PRrtStar | PlannerKind::PbRrtStar | PlannerKind::PibRrtStar
        )
    }

    pub fn is_bidirectional(self) -> bool {
        !matches!(self, PlannerKind::RrtStar | PlannerKind::PRrtStar)
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        PlannerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = PlannerKind::ALL.iter().map(|k| k.name()).collect();
                PlanError::InvalidArgument(format!(
                    "unknown planner `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Which pole the bidirectional planners pull samples towards. With
/// `Iteration`, extend-and-connect planners grow the start tree on even
/// iterations, so each tree is pulled toward the other tree's root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleSchedule {
    /// Goal on even iterations, start on odd ones.
    #[default]
    Iteration,
    /// Root of the tree being grown this iteration. Planners without an
    /// active tree fall back to `Iteration`.
    ActiveRoot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    pub kind: PlannerKind,
    pub gamma: f64,
    pub eps_steer: f64,
    pub collision_resolution: f64,
    pub max_iterations: u64,
    pub seed: u64,
    pub potential: PotentialParams,
    pub stop_on_first: bool,
    pub cost_trace_stride: u64,
    /// Stop as soon as the best cost drops to this value.
    #[serde(default)]
    pub target_cost: Option<f64>,
    /// Near radius used while the tree has a single vertex.
    pub max_radius: f64,
    #[serde(default = "default_log_base")]
    pub log_base: f64,
    #[serde(default)]
    pub pole_schedule: PoleSchedule,
}

fn default_log_base() -> f64 {
    std::f64::consts::E
}

impl PlannerConfig {
    pub fn near_radius(&self) -> NearRadius {
        NearRadius {
            gamma: self.gamma,
            max_radius: self.max_radius,
            log_base: self.log_base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(PlanError::InvalidArgument(format!(
                    "{what} must be positive and finite, got {v}"
                )))
            }
        };
        positive("gamma", self.gamma)?;
        positive("eps_steer", self.eps_steer)?;
        positive("collision_resolution", self.collision_resolution)?;
        positive("max_radius", self.max_radius)?;
        if !(self.log_base.is_finite() && self.log_base > 1.0) {
            return Err(PlanError::InvalidArgument(format!(
                "log_base must exceed 1, got {}",
                self.log_base
            )));
        }
        if self.max_iterations == 0 {
            return Err(PlanError::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.cost_trace_stride == 0 {
            return Err(PlanError::InvalidArgument(
                "cost_trace_stride must be at least 1".into(),
            ));
        }
        if let Some(t) = self.target_cost {
            positive("target_cost", t)?;
        }
        if self.kind.is_guided() {
            self.potential.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostSample {
    pub iteration: u64,
    pub cost: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSample {
    pub iteration: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub planner: PlannerKind,
    pub seed: u64,
    pub best_path: Option<Vec<ConfigPoint>>,
    pub best_cost: Option<f64>,
    pub first_solution_iteration: Option<u64>,
    pub first_solution_time: Option<f64>,
    /// Iteration at which the best cost first reached `target_cost`.
    pub target_iteration: Option<u64>,
    pub target_time: Option<f64>,
    pub total_iterations: u64,
    pub wall_time: f64,
    pub rewire_count: u64,
    pub theta: f64,
    pub cost_trace: Vec<CostSample>,
    pub time_trace: Vec<TimeSample>,
    pub tree_sizes: Vec<usize>,
    pub failed: bool,
}

impl RunResult {
    pub const WALL_TIME_FIELDS: [&'static str; 4] = [
        "first_solution_time",
        "target_time",
        "wall_time",
        "time_trace",
    ];

    pub fn best_cost_or_inf(&self) -> f64 {
        self.best_cost.unwrap_or(f64::INFINITY)
    }

    /// Copy with every wall-clock field cleared, for determinism checks.
    pub fn without_wall_time(&self) -> RunResult {
        RunResult {
            first_solution_time: None,
            target_time: None,
            wall_time: 0.0,
            time_trace: Vec::new(),
            ..self.clone()
        }
    }
}

/// Hooks called by the planner loops. Trees are passed start-rooted first.
pub trait PlannerObserver {
    /// After sampling and guidance, before the trees are touched.
    fn sampled(
        &mut self,
        _iteration: u64,
        _raw: &ConfigPoint,
        _guided: &ConfigPoint,
        _trees: &[MotionTree],
    ) {
    }

    fn iteration_end(&mut self, _iteration: u64, _trees: &[MotionTree]) {}
}

impl PlannerObserver for () {}

/// A finished run together with its final trees.
#[derive(Clone, Debug)]
pub struct Run {
    pub result: RunResult,
    pub trees: Vec<MotionTree>,
}

pub fn run_planner(env: &Environment, cfg: &PlannerConfig) -> Result<RunResult> {
    Ok(run_planner_with(env, cfg, &mut ())?.result)
}

pub fn run_planner_with<O: PlannerObserver>(
    env: &Environment,
    cfg: &PlannerConfig,
    observer: &mut O,
) -> Result<Run> {
    cfg.validate()?;
    match cfg.kind {
        PlannerKind::RrtStar | PlannerKind::PRrtStar => unidirectional::run(env, cfg, observer),
        PlannerKind::BRrtStar | PlannerKind::PbRrtStar => {
            bidirectional::run_extend_connect(env, cfg, observer)
        }
        PlannerKind::IbRrtStar | PlannerKind::PibRrtStar => {
            bidirectional::run_intelligent(env, cfg, observer)
        }
    }
}

/// Checks that `path` runs from the start into the goal region through free
/// space.
pub fn validate_path(env: &Environment, path: &[ConfigPoint], resolution: f64) -> bool {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return false;
    };
    first == env.start()
        && env.in_goal_region(last)
        && path
            .iter()
            .all(|p| p.dim() == env.dim() && env.is_free_unchecked(p))
        && path
            .windows(2)
            .all(|w| env.segment_free(&w[0], &w[1], resolution))
}
