use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::median_with_failures;
use crate::defaults::{ConfigOverrides, Defaults};
use crate::environment::{ball_volume, Environment};
use crate::error::{PlanError, Result};
use crate::planner::{run_planner, PlannerKind, RunResult};
use crate::point::ConfigPoint;
use crate::potential::{bpg, rgd};
use crate::tree::{MotionTree, NearRadius};

/// Vertices inside the near ball around `z`, per unit ball volume.
pub fn near_vertex_intensity(tree: &MotionTree, z: &ConfigPoint, radius: &NearRadius) -> f64 {
    let d = tree.dim();
    let r = radius.radius(tree.len(), d);
    let count = tree.within(z, r).len();
    if count == 0 {
        return 0.0;
    }
    count as f64 / ball_volume(d, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostTimePoint {
    pub time: f64,
    /// Median best cost over the runs; absent while fewer than half of
    /// them have a solution.
    pub median_cost: Option<f64>,
}

/// Wall time at which `iteration` completed, interpolated from the run's
/// time trace.
fn time_of(result: &RunResult, iteration: u64) -> f64 {
    let trace = &result.time_trace;
    let mut prev = (0u64, 0.0f64);
    for t in trace {
        if t.iteration >= iteration {
            let span = (t.iteration - prev.0) as f64;
            if span == 0.0 {
                return t.seconds;
            }
            let w = (iteration - prev.0) as f64 / span;
            return prev.1 + w * (t.seconds - prev.1);
        }
        prev = (t.iteration, t.seconds);
    }
    result.wall_time
}

fn cost_at(result: &RunResult, time: f64) -> Option<f64> {
    let mut cost = None;
    for (k, c) in result.cost_trace.iter().enumerate() {
        let at = match (k, result.first_solution_time) {
            (0, Some(t)) => t,
            _ => time_of(result, c.iteration),
        };
        if at > time {
            break;
        }
        cost = Some(c.cost);
    }
    cost
}

/// `points` evenly spaced times up to the longest wall time in `results`.
pub fn time_grid(results: &[RunResult], points: usize) -> Vec<f64> {
    let end = results.iter().map(|r| r.wall_time).fold(0.0, f64::max);
    (1..=points)
        .map(|k| end * k as f64 / points as f64)
        .collect()
}

/// Median best cost of `results` at each time of `grid`.
pub fn cost_time_series(results: &[RunResult], grid: &[f64]) -> Vec<CostTimePoint> {
    grid.iter()
        .map(|&time| {
            let costs: Vec<_> = results.iter().map(|r| cost_at(r, time)).collect();
            CostTimePoint {
                time,
                median_cost: median_with_failures(&costs),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSeries {
    pub iterations: Vec<u64>,
    /// One ratio curve per matched pair of runs.
    pub per_run: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
}

/// Cumulative wall-time ratio `a / b` at the iterations both time traces
/// share. Runs are paired by position.
pub fn runtime_ratio_series(a: &[RunResult], b: &[RunResult]) -> Result<RatioSeries> {
    if a.len() != b.len() || a.is_empty() {
        return Err(PlanError::InvalidArgument(format!(
            "need equally many matched runs, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut iterations: Vec<u64> = a[0].time_trace.iter().map(|t| t.iteration).collect();
    for r in a.iter().chain(b) {
        iterations.retain(|i| r.time_trace.iter().any(|t| t.iteration == *i));
    }
    let lookup = |r: &RunResult, i: u64| {
        r.time_trace
            .iter()
            .find(|t| t.iteration == i)
            .map(|t| t.seconds)
            .unwrap_or(f64::NAN)
    };
    let per_run: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            iterations
                .iter()
                .map(|&i| lookup(ra, i) / lookup(rb, i))
                .collect()
        })
        .collect();
    let mean = (0..iterations.len())
        .map(|k| per_run.iter().map(|r| r[k]).sum::<f64>() / per_run.len() as f64)
        .collect();
    Ok(RatioSeries {
        iterations,
        per_run,
        mean,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeInterval {
    /// Least-squares slope of each run's ratio against iteration.
    pub slopes: Vec<f64>,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SlopeInterval {
    pub fn contains_zero(&self) -> bool {
        self.lower <= 0.0 && 0.0 <= self.upper
    }
}

fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Two-sided t interval at `confidence` for the mean per-run slope over
/// iterations in `[from, to]`.
pub fn slope_interval(
    series: &RatioSeries,
    from: u64,
    to: u64,
    confidence: f64,
) -> Result<SlopeInterval> {
    let idx: Vec<usize> = (0..series.iterations.len())
        .filter(|&k| (from..=to).contains(&series.iterations[k]))
        .collect();
    if idx.len() < 2 || series.per_run.len() < 2 {
        return Err(PlanError::InvalidArgument(
            "slope interval needs at least two runs and two iterations in range".into(),
        ));
    }
    let x: Vec<f64> = idx.iter().map(|&k| series.iterations[k] as f64).collect();
    let slopes: Vec<f64> = series
        .per_run
        .iter()
        .map(|r| ols_slope(&x, &idx.iter().map(|&k| r[k]).collect::<Vec<_>>()))
        .collect();
    let n = slopes.len() as f64;
    let mean = slopes.iter().sum::<f64>() / n;
    let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .expect("valid degrees of freedom")
        .inverse_cdf(0.5 + confidence / 2.0);
    let half = t * (var / n).sqrt();
    Ok(SlopeInterval {
        slopes,
        mean,
        lower: mean - half,
        upper: mean + half,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_steps: u32,
    pub median_first_iteration: Option<f64>,
    pub failures: usize,
    /// Mean distance moved by guidance over a fixed batch of samples.
    pub mean_displacement: f64,
}

/// For each `n_steps` value: median iterations to a first solution over
/// `seeds`, and mean guidance displacement over the first `batch` samples
/// of every seed's sample stream.
#[allow(clippy::too_many_arguments)]
pub fn sweep_n_steps(
    env: &Environment,
    kind: PlannerKind,
    values: &[u32],
    seeds: &[u64],
    batch: usize,
    defaults: &Defaults,
    overrides: &ConfigOverrides,
) -> Result<Vec<SweepRow>> {
    if !kind.is_guided() {
        return Err(PlanError::InvalidArgument(format!(
            "{kind} does not use potential guidance"
        )));
    }
    let mut rows = Vec::with_capacity(values.len());
    for &n_steps in values {
        let overrides = ConfigOverrides {
            n_steps: Some(n_steps),
            stop_on_first: Some(true),
            ..overrides.clone()
        };
        let mut firsts = Vec::with_capacity(seeds.len());
        let mut total = 0.0;
        let mut count = 0usize;
        for &seed in seeds {
            let cfg = defaults.resolve(kind, env, seed, &overrides)?;
            let r = run_planner(env, &cfg)?;
            firsts.push(r.first_solution_iteration.map(|i| i as f64));

            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..batch {
                let z = env.sample_free(&mut rng)?;
                let g = if kind.is_bidirectional() {
                    bpg(&z, i as u64, &cfg.potential, env)
                } else {
                    rgd(&z, &cfg.potential, env)
                };
                total += z.dist(&g);
                count += 1;
            }
        }
        rows.push(SweepRow {
            n_steps,
            median_first_iteration: median_with_failures(&firsts),
            failures: firsts.iter().filter(|f| f.is_none()).count(),
            mean_displacement: if count == 0 {
                0.0
            } else {
                total / count as f64
            },
        });
    }
    Ok(rows)
}
