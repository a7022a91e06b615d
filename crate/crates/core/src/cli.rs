//! The `pgbrrt` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    export_results, render_svg, run_campaign, sweep_n_steps, BenchSpec, ExportFormat,
    RenderOptions, RunDocument, SweepRow,
};
use crate::defaults::{ConfigOverrides, Defaults};
use crate::environment::{Environment, ScenarioDocument};
use crate::error::{PlanError, Result};
use crate::io::write_atomic;
use crate::planner::{run_planner_with, PlannerKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_PATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pgbrrt",
    version,
    about = "Potentially guided bidirectional RRT* planners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one seeded planner and write the result as JSON.
    Plan(PlanArgs),
    /// Run a benchmark campaign and write the summary table.
    Bench(BenchArgs),
    /// Sweep the number of descent steps of a guided planner.
    Sweep(SweepArgs),
    /// Replay a stored run and draw it as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct Tuning {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "max-iters")]
    max_iters: Option<u64>,
    /// A positive number, or `auto` to derive it from the free-space measure.
    #[arg(long, value_parser = parse_gamma)]
    gamma: Option<Gamma>,
    #[arg(long = "eps-steer")]
    eps_steer: Option<f64>,
    #[arg(long)]
    kp: Option<f64>,
    #[arg(long = "eps-pot")]
    eps_pot: Option<f64>,
    #[arg(long = "n-steps")]
    n_steps: Option<u32>,
    #[arg(long = "d-obs")]
    d_obs: Option<f64>,
    #[arg(long = "goal-radius")]
    goal_radius: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
enum Gamma {
    Auto,
    Value(f64),
}

fn parse_gamma(s: &str) -> std::result::Result<Gamma, String> {
    if s == "auto" {
        return Ok(Gamma::Auto);
    }
    s.parse::<f64>()
        .map(Gamma::Value)
        .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
}

fn parse_planner(s: &str) -> std::result::Result<PlannerKind, String> {
    s.parse().map_err(|e: PlanError| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ExportFormat, String> {
    s.parse().map_err(|e: PlanError| e.to_string())
}

impl Tuning {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            gamma: match self.gamma {
                Some(Gamma::Value(g)) => Some(g),
                _ => None,
            },
            eps_steer: self.eps_steer,
            max_iterations: self.max_iters,
            k_p: self.kp,
            eps_pot: self.eps_pot,
            n_steps: self.n_steps,
            d_obs_star: self.d_obs,
            ..Default::default()
        }
    }

    fn environment(&self, path: &Path) -> Result<Environment> {
        let env = Environment::load_scenario_file(path)?;
        match self.goal_radius {
            Some(r) => env.with_goal_radius(r),
            None => Ok(env),
        }
    }
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_parser = parse_planner)]
    planner: PlannerKind,
    #[command(flatten)]
    tuning: Tuning,
    #[arg(long = "stop-on-first")]
    stop_on_first: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_format, default_value = "csv")]
    format: ExportFormat,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_parser = parse_planner)]
    planner: PlannerKind,
    #[command(flatten)]
    tuning: Tuning,
    /// Comma-separated descent step counts.
    #[arg(long, value_delimiter = ',', default_value = "0,5,10,50")]
    values: Vec<u32>,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 10)]
    runs: u64,
    /// Samples per seed used to measure displacement.
    #[arg(long, default_value_t = 1000)]
    batch: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_format, default_value = "csv")]
    format: ExportFormat,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// A document written by `plan --out`.
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Axis pair for scenes with more than two dimensions, e.g. `0,2`.
    #[arg(long, value_delimiter = ',')]
    projection: Option<Vec<usize>>,
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_USAGE;
        }
    };
    let outcome = Defaults::load().and_then(|defaults| match cli.command {
        Command::Plan(a) => plan(a, &defaults, out),
        Command::Bench(a) => bench(a, &defaults, out),
        Command::Sweep(a) => sweep(a, &defaults, out),
        Command::Render(a) => render(a, out),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn plan(a: PlanArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<i32> {
    let env = a.tuning.environment(&a.scenario)?;
    let seed = a.tuning.seed.unwrap_or(defaults.seed);
    let mut overrides = a.tuning.overrides();
    overrides.stop_on_first = Some(a.stop_on_first);
    let cfg = defaults.resolve(a.planner, &env, seed, &overrides)?;
    let run = run_planner_with(&env, &cfg, &mut ())?;
    let doc = RunDocument {
        version: crate::VERSION.to_string(),
        scenario: ScenarioDocument::from(&env),
        config: cfg,
        result: run.result,
    };
    write_atomic(&a.out, doc.to_json().as_bytes())?;
    if let Some(svg) = &a.svg {
        let text = render_svg(
            &env,
            &run.trees,
            doc.result.best_path.as_deref(),
            &RenderOptions::default(),
        )?;
        write_atomic(svg, text.as_bytes())?;
    }
    let r = &doc.result;
    let cost = r
        .best_cost
        .map_or("none".to_string(), |c| format!("{c:.6}"));
    let first = r
        .first_solution_iteration
        .map_or("none".to_string(), |i| i.to_string());
    let _ = writeln!(
        out,
        "{} seed={} iterations={} cost={cost} first_solution={first} theta={:.4} wall_time={:.3}s",
        r.planner, r.seed, r.total_iterations, r.theta, r.wall_time
    );
    Ok(if r.failed { EXIT_NO_PATH } else { EXIT_OK })
}

fn bench(a: BenchArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<i32> {
    let spec = BenchSpec::load_file(&a.spec, defaults)?;
    let campaign = run_campaign(&spec, defaults, a.jobs)?;
    export_results(&campaign, a.format, &a.out)?;
    for r in &campaign.rows {
        let avg = r.i_avg.map_or("-".to_string(), |v| format!("{v:.1}"));
        let _ = writeln!(
            out,
            "{} {} i_avg={avg} fail={:.1}%",
            r.scenario, r.planner, r.fail_percent
        );
    }
    Ok(EXIT_OK)
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| PlanError::Parse(format!("csv: {e}"));
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| PlanError::Parse(format!("csv: {e}")))?;
    if rows.is_empty() {
        return Ok("n_steps,median_first_iteration,failures,mean_displacement\n".into());
    }
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn sweep(a: SweepArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<i32> {
    let env = a.tuning.environment(&a.scenario)?;
    let first = a.tuning.seed.unwrap_or(defaults.seed);
    let seeds: Vec<u64> = (0..a.runs).map(|k| first.wrapping_add(k)).collect();
    let rows = sweep_n_steps(
        &env,
        a.planner,
        &a.values,
        &seeds,
        a.batch,
        defaults,
        &a.tuning.overrides(),
    )?;
    let text = match a.format {
        ExportFormat::Csv => sweep_csv(&rows)?,
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("sweep rows serialize");
            s.push('\n');
            s
        }
    };
    write_atomic(&a.out, text.as_bytes())?;
    for r in &rows {
        let median = r
            .median_first_iteration
            .map_or("-".to_string(), |m| format!("{m:.1}"));
        let _ = writeln!(
            out,
            "n_steps={} median_first_iteration={median} displacement={:.6}",
            r.n_steps, r.mean_displacement
        );
    }
    Ok(EXIT_OK)
}

fn render(a: RenderArgs, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(&a.run).map_err(|e| PlanError::io(&a.run, e))?;
    let doc = RunDocument::parse(&text)?;
    let env = doc.scenario.clone().into_environment()?;
    let run = run_planner_with(&env, &doc.config, &mut ())?;
    if run.result.without_wall_time() != doc.result.without_wall_time() {
        return Err(PlanError::Validation(format!(
            "{}: replaying the stored configuration does not reproduce the stored result",
            a.run.display()
        )));
    }
    let projection = match a.projection.as_deref() {
        None => None,
        Some(&[x, y]) => Some([x, y]),
        Some(p) => {
            return Err(PlanError::InvalidArgument(format!(
                "--projection takes two axes, got {}",
                p.len()
            )))
        }
    };
    let options = RenderOptions {
        projection,
        ..Default::default()
    };
    let svg = render_svg(&env, &run.trees, run.result.best_path.as_deref(), &options)?;
    write_atomic(&a.svg, svg.as_bytes())?;
    let vertices: usize = run.trees.iter().map(|t| t.len()).sum();
    let _ = writeln!(out, "rendered {vertices} vertices to {}", a.svg.display());
    Ok(EXIT_OK)
}
