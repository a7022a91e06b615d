//! Multi-seed campaigns, aggregation and diagnostics.

mod export;
mod series;
mod svg;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults::{ConfigOverrides, Defaults};
use crate::environment::{Environment, ScenarioDocument};
use crate::error::{PlanError, Result};
use crate::planner::{run_planner, PlannerKind, RunResult};

pub use export::{
    campaign_to_json, export_results, read_rows_csv, rows_from_json, rows_to_csv, ExportFormat,
    RunDocument, CSV_HEADER,
};
pub use series::{
    cost_time_series, near_vertex_intensity, runtime_ratio_series, slope_interval, sweep_n_steps,
    time_grid, CostTimePoint, RatioSeries, SlopeInterval, SweepRow,
};
pub use svg::{render_svg, RenderOptions};

/// A planner with per-campaign overrides of the defaults table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerTemplate {
    pub kind: PlannerKind,
    #[serde(default, flatten)]
    pub overrides: ConfigOverrides,
}

impl From<PlannerKind> for PlannerTemplate {
    fn from(kind: PlannerKind) -> Self {
        PlannerTemplate {
            kind,
            overrides: ConfigOverrides::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedScenario {
    pub name: String,
    pub env: Environment,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub scenarios: Vec<NamedScenario>,
    pub planners: Vec<PlannerTemplate>,
    pub runs_per_cell: usize,
    pub seed_base: u64,
    pub failure_cap: u64,
    pub optimal_tolerance: f64,
}

/// On-disk form of a [`BenchSpec`]. Scenarios are given inline or by a path
/// relative to the benchmark file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpecDocument {
    pub scenarios: Vec<ScenarioSource>,
    pub planners: Vec<PlannerTemplate>,
    #[serde(default)]
    pub runs_per_cell: Option<usize>,
    #[serde(default)]
    pub seed_base: Option<u64>,
    #[serde(default)]
    pub failure_cap: Option<u64>,
    #[serde(default)]
    pub optimal_tolerance: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSource {
    pub name: String,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub scenario: Option<ScenarioDocument>,
}

impl BenchSpec {
    pub fn new(
        scenarios: Vec<NamedScenario>,
        planners: Vec<PlannerTemplate>,
        defaults: &Defaults,
    ) -> Self {
        BenchSpec {
            scenarios,
            planners,
            runs_per_cell: defaults.runs_per_cell,
            seed_base: defaults.seed_base,
            failure_cap: defaults.failure_cap,
            optimal_tolerance: defaults.optimal_tolerance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs_per_cell == 0 {
            return Err(PlanError::InvalidArgument(
                "runs_per_cell must be at least 1".into(),
            ));
        }
        if self.failure_cap == 0 {
            return Err(PlanError::InvalidArgument(
                "failure_cap must be at least 1".into(),
            ));
        }
        if !(self.optimal_tolerance.is_finite() && self.optimal_tolerance >= 0.0) {
            return Err(PlanError::InvalidArgument(format!(
                "optimal_tolerance must be non-negative, got {}",
                self.optimal_tolerance
            )));
        }
        Ok(())
    }

    /// Parses a spec document, loading scenario files relative to `base_dir`.
    pub fn from_document(
        doc: BenchSpecDocument,
        base_dir: &Path,
        defaults: &Defaults,
    ) -> Result<Self> {
        let mut scenarios = Vec::with_capacity(doc.scenarios.len());
        for src in doc.scenarios {
            let env = match (&src.path, src.scenario) {
                (Some(p), None) => Environment::load_scenario_file(base_dir.join(p)),
                (None, Some(s)) => s.into_environment(),
                _ => Err(PlanError::Validation(
                    "give exactly one of `path` or `scenario`".into(),
                )),
            }
            .map_err(|e| PlanError::Validation(format!("scenario `{}`: {e}", src.name)))?;
            scenarios.push(NamedScenario {
                name: src.name,
                env,
            });
        }
        let spec = BenchSpec {
            scenarios,
            planners: doc.planners,
            runs_per_cell: doc.runs_per_cell.unwrap_or(defaults.runs_per_cell),
            seed_base: doc.seed_base.unwrap_or(defaults.seed_base),
            failure_cap: doc.failure_cap.unwrap_or(defaults.failure_cap),
            optimal_tolerance: doc.optimal_tolerance.unwrap_or(defaults.optimal_tolerance),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load_file(path: &Path, defaults: &Defaults) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PlanError::io(path, e))?;
        let doc: BenchSpecDocument = serde_json::from_str(&text)
            .map_err(|e| PlanError::Parse(format!("bench spec: {e}")))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_document(doc, base, defaults)
    }
}

/// One row of the summary table. Iteration and time aggregates cover
/// successful runs only and are absent when every run failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scenario: String,
    pub planner: PlannerKind,
    pub i_min: Option<u64>,
    pub i_max: Option<u64>,
    pub i_avg: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_avg: Option<f64>,
    pub theta_avg: Option<f64>,
    #[serde(rename = "cost")]
    pub reference_cost: f64,
    #[serde(rename = "fail_pct")]
    pub fail_percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRun {
    pub scenario: String,
    pub run_index: usize,
    pub result: RunResult,
}

impl CampaignRun {
    /// Iterations needed to reach the optimal band, if it was reached.
    pub fn iterations_to_optimal(&self) -> Option<u64> {
        self.result.target_iteration
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub rows: Vec<BenchRow>,
    pub runs: Vec<CampaignRun>,
}

impl Campaign {
    pub fn runs_of<'a>(
        &'a self,
        scenario: &'a str,
        planner: PlannerKind,
    ) -> impl Iterator<Item = &'a CampaignRun> + 'a {
        self.runs
            .iter()
            .filter(move |r| r.scenario == scenario && r.result.planner == planner)
    }
}

/// Runs every (scenario, planner, run index) cell. Run `j` uses seed
/// `seed_base + j` for every planner. A run fails when it has not reached
/// `reference_cost * (1 + optimal_tolerance)` within `failure_cap`
/// iterations. `jobs = 0` uses the global thread pool.
pub fn run_campaign(spec: &BenchSpec, defaults: &Defaults, jobs: usize) -> Result<Campaign> {
    spec.validate()?;
    let mut cells = Vec::new();
    for (si, sc) in spec.scenarios.iter().enumerate() {
        let reference = sc.env.reference_cost().ok_or_else(|| {
            PlanError::Validation(format!("scenario `{}` has no reference_cost", sc.name))
        })?;
        for template in &spec.planners {
            for j in 0..spec.runs_per_cell {
                let seed = spec.seed_base.wrapping_add(j as u64);
                let mut cfg = defaults
                    .resolve(template.kind, &sc.env, seed, &template.overrides)
                    .map_err(|e| PlanError::Validation(format!("scenario `{}`: {e}", sc.name)))?;
                cfg.max_iterations = spec.failure_cap;
                cfg.target_cost = Some(reference * (1.0 + spec.optimal_tolerance));
                cfg.stop_on_first = false;
                cells.push((si, j, cfg));
            }
        }
    }

    let execute = || -> Result<Vec<CampaignRun>> {
        cells
            .par_iter()
            .map(|(si, j, cfg)| {
                let sc = &spec.scenarios[*si];
                Ok(CampaignRun {
                    scenario: sc.name.clone(),
                    run_index: *j,
                    result: run_planner(&sc.env, cfg)?,
                })
            })
            .collect()
    };
    let runs = if jobs == 0 {
        execute()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| PlanError::InvalidArgument(format!("thread pool: {e}")))?
            .install(execute)?
    };

    let mut rows = Vec::new();
    for sc in &spec.scenarios {
        let reference = sc.env.reference_cost().unwrap_or(f64::NAN);
        for template in &spec.planners {
            let cell: Vec<_> = runs
                .iter()
                .filter(|r| r.scenario == sc.name && r.result.planner == template.kind)
                .collect();
            rows.push(aggregate(&sc.name, template.kind, reference, &cell));
        }
    }
    Ok(Campaign { rows, runs })
}

fn aggregate(
    scenario: &str,
    planner: PlannerKind,
    reference: f64,
    runs: &[&CampaignRun],
) -> BenchRow {
    let ok: Vec<_> = runs
        .iter()
        .filter_map(|r| {
            Some((
                r.result.target_iteration?,
                r.result.target_time?,
                r.result.theta,
            ))
        })
        .collect();
    let n = ok.len() as f64;
    let mean = |f: &dyn Fn(&(u64, f64, f64)) -> f64| {
        (!ok.is_empty()).then(|| ok.iter().map(f).sum::<f64>() / n)
    };
    let fmin = |f: &dyn Fn(&(u64, f64, f64)) -> f64| ok.iter().map(f).reduce(f64::min);
    let fmax = |f: &dyn Fn(&(u64, f64, f64)) -> f64| ok.iter().map(f).reduce(f64::max);
    BenchRow {
        scenario: scenario.to_string(),
        planner,
        i_min: ok.iter().map(|o| o.0).min(),
        i_max: ok.iter().map(|o| o.0).max(),
        i_avg: mean(&|o| o.0 as f64),
        t_min: fmin(&|o| o.1),
        t_max: fmax(&|o| o.1),
        t_avg: mean(&|o| o.1),
        theta_avg: mean(&|o| o.2),
        reference_cost: reference,
        fail_percent: if runs.is_empty() {
            0.0
        } else {
            100.0 * (runs.len() - ok.len()) as f64 / runs.len() as f64
        },
    }
}

/// Median of `values`, treating `None` as worse than any value. Returns
/// `None` when the median itself falls on a missing value.
pub fn median_with_failures(values: &[Option<f64>]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().map(|x| x.unwrap_or(f64::INFINITY)).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let m = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    m.is_finite().then_some(m)
}

/// Reference cost for `env`: the minimum best cost of several long runs.
pub fn calibrate_reference(
    env: &Environment,
    defaults: &Defaults,
    kind: PlannerKind,
    iterations: u64,
    seeds: &[u64],
) -> Result<Option<f64>> {
    let costs = seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = defaults.planner_config(kind, env, seed)?;
            cfg.max_iterations = iterations;
            Ok(run_planner(env, &cfg)?.best_cost)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(costs.into_iter().flatten().reduce(f64::min))
}
