//! The configuration space: bounds, closed obstacles, and the planning
//! triplet (start, goal ball, free space).

mod obstacle;
mod scenario;

use rand::Rng;

pub use obstacle::{ball_volume, Obstacle};
pub use scenario::ScenarioDocument;

use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;

/// Rejection draws allowed in [`Environment::sample_free`] before the
/// environment is declared degenerate.
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

pub const DEFAULT_GOAL_RADIUS: f64 = 0.5;

/// Closed axis-aligned box `min <= z <= max`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub min: ConfigPoint,
    pub max: ConfigPoint,
}

impl Bounds {
    pub fn new(min: impl Into<ConfigPoint>, max: impl Into<ConfigPoint>) -> Self {
        Bounds {
            min: min.into(),
            max: max.into(),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.min.coords())
            .zip(self.max.coords())
            .all(|((&x, &lo), &hi)| lo <= x && x <= hi)
    }

    pub fn volume(&self) -> f64 {
        self.extent().product()
    }

    pub fn diagonal(&self) -> f64 {
        self.extent().map(|e| e * e).sum::<f64>().sqrt()
    }

    fn extent(&self) -> impl Iterator<Item = f64> + '_ {
        self.min
            .coords()
            .iter()
            .zip(self.max.coords())
            .map(|(lo, hi)| hi - lo)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ConfigPoint {
        ConfigPoint::new(
            self.min
                .coords()
                .iter()
                .zip(self.max.coords())
                .map(|(lo, hi)| lo + rng.gen::<f64>() * (hi - lo)),
        )
    }
}

/// A validated planning problem. Immutable once built; share it freely
/// between concurrent runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    name: Option<String>,
    bounds: Bounds,
    obstacles: Vec<Obstacle>,
    start: ConfigPoint,
    goal: ConfigPoint,
    goal_radius: f64,
    reference_cost: Option<f64>,
    rejection_cap: u64,
    // broad-phase boxes, one per obstacle
    aabbs: Vec<(ConfigPoint, ConfigPoint)>,
}

impl Environment {
    /// Builds and validates an environment.
    pub fn new(
        bounds: Bounds,
        obstacles: Vec<Obstacle>,
        start: impl Into<ConfigPoint>,
        goal: impl Into<ConfigPoint>,
        goal_radius: f64,
    ) -> Result<Self> {
        let aabbs = obstacles.iter().map(Obstacle::aabb).collect();
        let env = Environment {
            name: None,
            bounds,
            obstacles,
            start: start.into(),
            goal: goal.into(),
            goal_radius,
            reference_cost: None,
            rejection_cap: DEFAULT_REJECTION_CAP,
            aabbs,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_reference_cost(mut self, cost: Option<f64>) -> Result<Self> {
        if let Some(c) = cost {
            if !(c.is_finite() && c > 0.0) {
                return Err(PlanError::Validation(format!(
                    "reference_cost must be positive and finite, got {c}"
                )));
            }
        }
        self.reference_cost = cost;
        Ok(self)
    }

    pub fn with_goal_radius(mut self, goal_radius: f64) -> Result<Self> {
        self.goal_radius = goal_radius;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rejection_cap(mut self, cap: u64) -> Self {
        self.rejection_cap = cap.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        let d = self.bounds.min.dim();
        if d < 2 {
            return Err(PlanError::Validation(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        let dim_err = |what: &str, found: usize| {
            PlanError::Validation(format!(
                "dimension mismatch: {what} has {found} coordinates, environment has {d}"
            ))
        };
        if self.bounds.max.dim() != d {
            return Err(dim_err("bounds.max", self.bounds.max.dim()));
        }
        for (lo, hi) in self
            .bounds
            .min
            .coords()
            .iter()
            .zip(self.bounds.max.coords())
        {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(PlanError::Validation(format!(
                    "bounds must satisfy min < max with finite values, got [{lo}, {hi}]"
                )));
            }
        }
        for (k, obs) in self.obstacles.iter().enumerate() {
            if obs.dim() != d {
                return Err(dim_err(&format!("obstacle {k}"), obs.dim()));
            }
            match obs {
                Obstacle::Box { min, max } => {
                    if max.dim() != d {
                        return Err(dim_err(&format!("obstacle {k} max"), max.dim()));
                    }
                    if !(min.is_finite() && max.is_finite())
                        || min
                            .coords()
                            .iter()
                            .zip(max.coords())
                            .any(|(lo, hi)| lo > hi)
                    {
                        return Err(PlanError::Validation(format!(
                            "obstacle {k}: box min must be <= max componentwise"
                        )));
                    }
                }
                Obstacle::Sphere { center, radius } => {
                    if !(center.is_finite() && radius.is_finite() && *radius > 0.0) {
                        return Err(PlanError::Validation(format!(
                            "obstacle {k}: sphere radius must be > 0, got {radius}"
                        )));
                    }
                }
            }
            let (lo, hi) = obs.aabb();
            if !(self.bounds.contains(lo.coords()) && self.bounds.contains(hi.coords())) {
                return Err(PlanError::Validation(format!(
                    "obstacle {k} extends outside the environment bounds"
                )));
            }
        }
        for (what, p) in [("start", &self.start), ("goal", &self.goal)] {
            if p.dim() != d {
                return Err(dim_err(what, p.dim()));
            }
            if !p.is_finite() {
                return Err(PlanError::Validation(format!("{what} is not finite")));
            }
            if !self.is_free_unchecked(p) {
                return Err(PlanError::Validation(format!(
                    "{what} must lie in free space: {p:?} is outside the bounds or inside an obstacle"
                )));
            }
        }
        if !(self.goal_radius.is_finite() && self.goal_radius > 0.0) {
            return Err(PlanError::Validation(format!(
                "goal_radius must be > 0, got {}",
                self.goal_radius
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.bounds.min.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn start(&self) -> &ConfigPoint {
        &self.start
    }

    pub fn goal(&self) -> &ConfigPoint {
        &self.goal
    }

    pub fn goal_radius(&self) -> f64 {
        self.goal_radius
    }

    pub fn reference_cost(&self) -> Option<f64> {
        self.reference_cost
    }

    /// Closed goal ball test.
    pub fn in_goal_region(&self, z: &ConfigPoint) -> bool {
        z.dist(&self.goal) <= self.goal_radius
    }

    /// True iff `z` is inside the bounds and outside every (closed) obstacle.
    pub fn is_free(&self, z: &ConfigPoint) -> Result<bool> {
        z.check_dim(self.dim())?;
        Ok(self.is_free_unchecked(z))
    }

    #[inline]
    pub(crate) fn is_free_unchecked(&self, z: &ConfigPoint) -> bool {
        let p = z.coords();
        self.bounds.contains(p) && !self.obstacles.iter().any(|o| o.contains(p))
    }

    /// Distance to the nearest obstacle point, `0` inside an obstacle,
    /// `f64::INFINITY` when there are no obstacles.
    pub fn nearest_obstacle_distance(&self, z: &ConfigPoint) -> Result<f64> {
        z.check_dim(self.dim())?;
        Ok(self.nearest_obstacle_distance_unchecked(z))
    }

    pub(crate) fn nearest_obstacle_distance_unchecked(&self, z: &ConfigPoint) -> f64 {
        let p = z.coords();
        self.obstacles
            .iter()
            .map(|o| o.distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// True iff the closed segment `ab` lies in free space.
    ///
    /// Segments are tested exactly against every box and sphere, so the
    /// answer does not depend on `resolution`; any point sampled along the
    /// segment at that spacing is free whenever this returns true. The
    /// bounds are convex, so checking both endpoints covers them.
    pub fn segment_free(&self, a: &ConfigPoint, b: &ConfigPoint, resolution: f64) -> bool {
        debug_assert!(resolution > 0.0);
        // Canonical endpoint order keeps the floating-point test symmetric.
        let (a, b) = if a.coords() <= b.coords() {
            (a, b)
        } else {
            (b, a)
        };
        if !self.is_free_unchecked(a) || !self.is_free_unchecked(b) {
            return false;
        }
        let (pa, pb) = (a.coords(), b.coords());
        !self.obstacles.iter().zip(&self.aabbs).any(|(o, (lo, hi))| {
            let overlaps = pa
                .iter()
                .zip(pb)
                .zip(lo.coords().iter().zip(hi.coords()))
                .all(|((&x, &y), (&l, &h))| x.min(y) <= h && x.max(y) >= l);
            overlaps && o.intersects_segment(pa, pb)
        })
    }

    /// Uniform rejection sample from the free space.
    pub fn sample_free<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ConfigPoint> {
        for _ in 0..self.rejection_cap {
            let z = self.bounds.sample(rng);
            if self.is_free_unchecked(&z) {
                return Ok(z);
            }
        }
        Err(PlanError::DegenerateEnvironment {
            attempts: self.rejection_cap,
        })
    }

    /// Monte-Carlo estimate of the free-space measure.
    pub fn free_measure_estimate<R: Rng + ?Sized>(&self, samples: u64, rng: &mut R) -> f64 {
        let samples = samples.max(1);
        let hits = (0..samples)
            .filter(|_| self.is_free_unchecked(&self.bounds.sample(rng)))
            .count();
        hits as f64 / samples as f64 * self.bounds.volume()
    }
}

#[cfg(test)]
mod tests;
