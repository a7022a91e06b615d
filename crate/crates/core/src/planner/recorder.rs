use std::time::Instant;

use super::{CostSample, PlannerConfig, RunResult, TimeSample};
use crate::point::ConfigPoint;

/// Best-cost bookkeeping, traces and stop conditions for one run.
pub(super) struct Recorder {
    clock: Instant,
    stride: u64,
    stop_on_first: bool,
    target: Option<f64>,
    best: f64,
    first: Option<(u64, f64)>,
    reached: Option<(u64, f64)>,
    cost_trace: Vec<CostSample>,
    time_trace: Vec<TimeSample>,
    untraced: bool,
}

impl Recorder {
    pub fn new(cfg: &PlannerConfig) -> Self {
        Recorder {
            clock: Instant::now(),
            stride: cfg.cost_trace_stride,
            stop_on_first: cfg.stop_on_first,
            target: cfg.target_cost,
            best: f64::INFINITY,
            first: None,
            reached: None,
            cost_trace: Vec::new(),
            time_trace: Vec::new(),
            untraced: false,
        }
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    /// Records `cost` if it strictly improves on the best so far.
    pub fn improve(&mut self, iteration: u64, cost: f64) -> bool {
        if !(cost < self.best) {
            return false;
        }
        self.best = cost;
        if self.first.is_none() {
            self.first = Some((iteration, self.elapsed()));
            self.cost_trace.push(CostSample { iteration, cost });
        } else {
            self.untraced = true;
        }
        if self.reached.is_none() && self.target.is_some_and(|t| cost <= t) {
            self.reached = Some((iteration, self.elapsed()));
        }
        true
    }

    /// Emits strided trace entries and reports whether the run should stop.
    pub fn end_iteration(&mut self, iteration: u64) -> bool {
        if iteration.is_multiple_of(self.stride) {
            self.flush(iteration);
            let seconds = self.elapsed();
            self.time_trace.push(TimeSample { iteration, seconds });
        }
        (self.stop_on_first && self.first.is_some()) || self.reached.is_some()
    }

    fn flush(&mut self, iteration: u64) {
        if self.untraced {
            self.cost_trace.push(CostSample {
                iteration,
                cost: self.best,
            });
            self.untraced = false;
        }
    }

    fn elapsed(&self) -> f64 {
        self.clock.elapsed().as_secs_f64()
    }

    pub fn finish(
        mut self,
        cfg: &PlannerConfig,
        iterations: u64,
        rewires: u64,
        best_path: Option<Vec<ConfigPoint>>,
        tree_sizes: Vec<usize>,
    ) -> RunResult {
        self.flush(iterations);
        let wall_time = self.elapsed();
        if self
            .time_trace
            .last()
            .is_none_or(|t| t.iteration != iterations)
        {
            self.time_trace.push(TimeSample {
                iteration: iterations,
                seconds: wall_time,
            });
        }
        let best_cost = best_path.as_ref().map(|_| self.best);
        RunResult {
            planner: cfg.kind,
            seed: cfg.seed,
            failed: best_path.is_none(),
            best_path,
            best_cost,
            first_solution_iteration: self.first.map(|f| f.0),
            first_solution_time: self.first.map(|f| f.1),
            target_iteration: self.reached.map(|r| r.0),
            target_time: self.reached.map(|r| r.1),
            total_iterations: iterations,
            wall_time,
            rewire_count: rewires,
            theta: if iterations == 0 {
                0.0
            } else {
                rewires as f64 / iterations as f64
            },
            cost_trace: self.cost_trace,
            time_trace: self.time_trace,
            tree_sizes,
        }
    }
}
