//! Repeated scenario runs, medians and the summary tables.

use std::fmt::Write as _;

use polynav::simulation::{run_scenario, PlanStatus, PlannerKind, RunStatus, SimulationRun};
use polynav::baseline::default_resolution;
use serde::{Deserialize, Serialize};

use crate::format::Scenario;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub reps: usize,
    pub planners: Vec<PlannerKind>,
    /// Overrides every scenario's grid resolution.
    pub grid_resolution: Option<f64>,
}

/// Median over repetitions of one scenario × planner combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    pub reps: usize,
    pub status: RunStatus,
    pub plan_calls: usize,
    /// Median planner wall time of each plan call, in call order.
    pub replan_seconds: Vec<f64>,
    /// Median map preparation time (padding, rasterization) per call.
    pub prepare_seconds: Vec<f64>,
    pub total_planning_seconds: f64,
    pub goal_reached_time: Option<f64>,
    pub path_lengths: Vec<f64>,
    pub segment_counts: Vec<usize>,
    pub intersection_tests: Vec<u64>,
    /// Whether every repetition logged identical planner output.
    pub repeatable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub scenario: String,
    pub planner: PlannerKind,
    pub grid_resolution: Option<f64>,
    pub result: Result<CellMetrics, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub reps: usize,
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn cell(&self, scenario: &str, planner: PlannerKind) -> Option<&BenchCell> {
        self.cells.iter().find(|c| c.scenario == scenario && c.planner == planner)
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// The parts of a run that must not change between repetitions.
fn fingerprint(run: &SimulationRun) -> String {
    serde_json::to_string(&(&run.replans, run.goal_reached_time, run.status)).expect("serializable")
}

fn summarize(runs: &[SimulationRun]) -> CellMetrics {
    let first = &runs[0];
    let calls = first.replans.len();
    let per_call = |f: &dyn Fn(&SimulationRun, usize) -> f64| -> Vec<f64> {
        (0..calls)
            .map(|i| median(&mut runs.iter().map(|r| f(r, i)).collect::<Vec<_>>()))
            .collect()
    };
    let replan_seconds = per_call(&|r, i| r.replans[i].timing.plan_seconds);
    let prepare_seconds = per_call(&|r, i| r.replans[i].timing.prepare_seconds);
    let total_planning_seconds = median(
        &mut runs.iter().map(|r| r.replans.iter().map(|p| p.timing.plan_seconds).sum()).collect::<Vec<_>>(),
    );
    let fp = fingerprint(first);
    CellMetrics {
        reps: runs.len(),
        status: first.status,
        plan_calls: calls,
        replan_seconds,
        prepare_seconds,
        total_planning_seconds,
        goal_reached_time: first.goal_reached_time,
        path_lengths: first
            .replans
            .iter()
            .filter_map(|r| match r.status {
                PlanStatus::Ok { length, .. } => Some(length),
                _ => None,
            })
            .collect(),
        segment_counts: first
            .replans
            .iter()
            .filter_map(|r| match r.status {
                PlanStatus::Ok { segments, .. } => Some(segments),
                _ => None,
            })
            .collect(),
        intersection_tests: first.replans.iter().filter_map(|r| r.counters.map(|c| c.intersection_tests)).collect(),
        repeatable: runs.iter().all(|r| fingerprint(r) == fp),
    }
}

/// Runs every scenario with every planner `reps` times, serially so the
/// timings do not compete for cores.
pub fn run_benchmark(scenarios: &[Scenario], opts: &BenchOptions) -> BenchReport {
    let mut cells = Vec::new();
    for sc in scenarios {
        for &planner in &opts.planners {
            let mut cfg = sc.config.clone();
            if opts.grid_resolution.is_some() {
                cfg.grid_resolution = opts.grid_resolution;
            }
            let grid_resolution = (planner == PlannerKind::GridAStar)
                .then(|| cfg.grid_resolution.unwrap_or_else(|| default_resolution(&sc.map)));
            let mut runs = Vec::with_capacity(opts.reps);
            let mut failure = None;
            for _ in 0..opts.reps.max(1) {
                match run_scenario(&sc.name, &sc.map, &sc.script, sc.start, sc.target, planner, &cfg) {
                    Ok(run) => runs.push(run),
                    Err(e) => {
                        failure = Some(e.to_string());
                        break;
                    }
                }
            }
            let result = match failure {
                Some(e) => Err(e),
                None => {
                    let m = summarize(&runs);
                    if m.status == RunStatus::GoalReached {
                        Ok(m)
                    } else {
                        Err(format!("run ended with {:?} after {} plan calls", m.status, m.plan_calls))
                    }
                }
            };
            cells.push(BenchCell { scenario: sc.name.clone(), planner, grid_resolution, result });
        }
    }
    BenchReport { reps: opts.reps.max(1), cells }
}

fn planner_title(p: PlannerKind) -> &'static str {
    match p {
        PlannerKind::MinimalConstruct => "Minimal Construct",
        PlannerKind::GridAStar => "Grid A*",
        PlannerKind::VisibilityGraph => "Visibility graph",
    }
}

/// Recomputation times (first two plan calls, in milliseconds) and total
/// goal-reach times, one row per scenario.
pub fn format_tables(report: &BenchReport) -> String {
    let mut scenarios: Vec<&str> = Vec::new();
    let mut planners: Vec<PlannerKind> = Vec::new();
    for c in &report.cells {
        if !scenarios.contains(&c.scenario.as_str()) {
            scenarios.push(&c.scenario);
        }
        if !planners.contains(&c.planner) {
            planners.push(c.planner);
        }
    }
    let col = 24;
    let mut out = String::new();
    let _ = writeln!(out, "Recomputation time (ms, median of {} runs, first two plan calls)", report.reps);
    let _ = write!(out, "{:<12}", "Scenario");
    for p in &planners {
        let _ = write!(out, "{:>col$}", planner_title(*p));
    }
    out.push('\n');
    for sc in &scenarios {
        let _ = write!(out, "{sc:<12}");
        for &p in &planners {
            let text = match report.cell(sc, p).map(|c| &c.result) {
                Some(Ok(m)) => m
                    .replan_seconds
                    .iter()
                    .take(2)
                    .map(|s| format!("{:.3}", s * 1e3))
                    .collect::<Vec<_>>()
                    .join(", "),
                Some(Err(_)) => "failed".to_string(),
                None => "-".to_string(),
            };
            let _ = write!(out, "{text:>col$}");
        }
        out.push('\n');
    }
    out.push('\n');
    let _ = writeln!(out, "Time to reach the goal (simulated s)");
    let _ = write!(out, "{:<12}", "Scenario");
    for p in &planners {
        let _ = write!(out, "{:>col$}", planner_title(*p));
    }
    out.push('\n');
    for sc in &scenarios {
        let _ = write!(out, "{sc:<12}");
        for &p in &planners {
            let text = match report.cell(sc, p).map(|c| &c.result) {
                Some(Ok(m)) => m.goal_reached_time.map_or("-".to_string(), |t| format!("{t:.2}")),
                Some(Err(_)) => "failed".to_string(),
                None => "-".to_string(),
            };
            let _ = write!(out, "{text:>col$}");
        }
        out.push('\n');
    }
    let resolutions: Vec<String> = report
        .cells
        .iter()
        .filter_map(|c| c.grid_resolution.map(|r| format!("{}={r:.4}", c.scenario)))
        .collect();
    if !resolutions.is_empty() {
        let _ = writeln!(out, "\nGrid resolution: {}", resolutions.join(" "));
    }
    let failures: Vec<String> = report
        .cells
        .iter()
        .filter_map(|c| c.result.as_ref().err().map(|e| format!("{} / {}: {e}", c.scenario, c.planner.short_name())))
        .collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "\nFailures:");
        for f in failures {
            let _ = writeln!(out, "  {f}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
