//! JSON scenario documents.
//!
//! ```json
//! {
//!   "name": "corridor",
//!   "dimension": 2,
//!   "bounds": { "min": [0.0, 0.0], "max": [10.0, 10.0] },
//!   "obstacles": [
//!     { "type": "box", "min": [4.0, 0.0], "max": [6.0, 4.5] },
//!     { "type": "sphere", "center": [2.0, 7.0], "radius": 1.0 }
//!   ],
//!   "start": [1.0, 1.0],
//!   "goal": [9.0, 1.0],
//!   "goal_radius": 0.5,
//!   "reference_cost": 12.3
//! }
//! ```
//!
//! `name`, `goal_radius` (default 0.5) and `reference_cost` are optional.
//! [`ScenarioDocument::to_json`] is the canonical rendering: fixed key order,
//! two-space indentation, shortest round-trip float formatting.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Bounds, Environment, Obstacle, DEFAULT_GOAL_RADIUS};
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsDocument {
    pub min: ConfigPoint,
    pub max: ConfigPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub bounds: BoundsDocument,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    pub start: ConfigPoint,
    pub goal: ConfigPoint,
    #[serde(default = "default_goal_radius")]
    pub goal_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_cost: Option<f64>,
}

fn default_goal_radius() -> f64 {
    DEFAULT_GOAL_RADIUS
}

impl ScenarioDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| PlanError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn into_environment(self) -> Result<Environment> {
        let d = self.dimension;
        let mismatch = |what: String, found: usize| {
            PlanError::Validation(format!(
                "dimension mismatch: {what} has {found} coordinates but dimension is {d}"
            ))
        };
        for (what, p) in [
            ("bounds.min", &self.bounds.min),
            ("bounds.max", &self.bounds.max),
            ("start", &self.start),
            ("goal", &self.goal),
        ] {
            if p.dim() != d {
                return Err(mismatch(what.to_string(), p.dim()));
            }
        }
        for (k, o) in self.obstacles.iter().enumerate() {
            let dims = match o {
                Obstacle::Box { min, max } => [min.dim(), max.dim()],
                Obstacle::Sphere { center, .. } => [center.dim(), center.dim()],
            };
            if let Some(&bad) = dims.iter().find(|&&n| n != d) {
                return Err(mismatch(format!("obstacle {k}"), bad));
            }
        }
        let mut env = Environment::new(
            Bounds::new(self.bounds.min, self.bounds.max),
            self.obstacles,
            self.start,
            self.goal,
            self.goal_radius,
        )?
        .with_reference_cost(self.reference_cost)?;
        if let Some(name) = self.name {
            env = env.with_name(name);
        }
        Ok(env)
    }
}

impl From<&Environment> for ScenarioDocument {
    fn from(env: &Environment) -> Self {
        ScenarioDocument {
            name: env.name().map(str::to_owned),
            dimension: env.dim(),
            bounds: BoundsDocument {
                min: env.bounds().min.clone(),
                max: env.bounds().max.clone(),
            },
            obstacles: env.obstacles().to_vec(),
            start: env.start().clone(),
            goal: env.goal().clone(),
            goal_radius: env.goal_radius(),
            reference_cost: env.reference_cost(),
        }
    }
}

impl Environment {
    /// Parses and validates a scenario document.
    pub fn load_scenario(text: &str) -> Result<Self> {
        ScenarioDocument::parse(text)?.into_environment()
    }

    pub fn load_scenario_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| PlanError::io(path, e))?;
        Self::load_scenario(&text)
    }

    /// Canonical scenario rendering of this environment.
    pub fn to_scenario_json(&self) -> String {
        ScenarioDocument::from(self).to_json()
    }
}
