//! The replanning loop: track the global path with pure pursuit and replan
//! from the robot's current position whenever the map changes or the
//! remaining path runs into an obstacle.

use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::baseline::{default_resolution, grid_astar, oracle_shortest_path, rasterize};
use crate::error::{CompareError, PlanError, ScenarioError};
use crate::geometry::Point2;
use crate::map::{apply_event, path_collides, MapEvent, PolygonMap};
use crate::minimal_construct::{self, SearchCounters};
use crate::path::Path;
use crate::tracking::{pursuit_command, step_kinematics, PathTracker, PursuitConfig, RobotState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlannerKind {
    MinimalConstruct,
    GridAStar,
    /// Full visibility graph; exact like the lazy search, but slower.
    VisibilityGraph,
}

impl PlannerKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            PlannerKind::MinimalConstruct => "mc",
            PlannerKind::GridAStar => "grid",
            PlannerKind::VisibilityGraph => "oracle",
        }
    }
}

/// Map events sorted by time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioScript {
    events: Vec<MapEvent>,
}

impl ScenarioScript {
    pub fn new(events: Vec<MapEvent>) -> Result<Self, ScenarioError> {
        for (i, w) in events.windows(2).enumerate() {
            if w[0].time > w[1].time {
                return Err(ScenarioError::Unsorted(i + 1));
            }
        }
        if let Some(i) = events.iter().position(|e| !e.time.is_finite() || e.time < 0.0) {
            return Err(ScenarioError::Unsorted(i));
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[MapEvent] {
        &self.events
    }

    /// Applies every event in order to `map`, failing on the first one
    /// that cannot be applied.
    pub fn dry_run(&self, map: &PolygonMap) -> Result<PolygonMap, ScenarioError> {
        let mut m = map.clone();
        for (index, e) in self.events.iter().enumerate() {
            m = apply_event(&m, e)
                .map_err(|source| ScenarioError::BadEvent { index, time: e.time, source })?;
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub pursuit: PursuitConfig,
    /// Extra margin added around every obstacle for planning only.
    pub clearance: f64,
    /// Grid cell size; `None` uses the map extent over 200.
    pub grid_resolution: Option<f64>,
    /// Simulated seconds before the run is abandoned.
    pub timeout: f64,
    /// Initial heading; `None` faces along the first path segment.
    pub initial_heading: Option<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            pursuit: PursuitConfig::default(),
            clearance: 0.35,
            grid_resolution: None,
            timeout: 300.0,
            initial_heading: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReplanTrigger {
    Initial,
    MapChanged,
    PathCollision,
    MapChangedAndCollision,
}

/// Wall-clock cost of one planner call. Not part of the deterministic log.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanTiming {
    /// Seconds spent inside the planner proper.
    pub plan_seconds: f64,
    /// Seconds spent preparing the planner's map (padding, rasterization).
    pub prepare_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum PlanStatus {
    Ok { length: f64, segments: usize },
    NoPath,
    InvalidQuery { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplanRecord {
    pub tick: u64,
    pub time: f64,
    pub trigger: ReplanTrigger,
    pub origin: Point2,
    pub map_version: u64,
    pub status: PlanStatus,
    pub counters: Option<SearchCounters>,
    pub grid_expanded: Option<u64>,
    /// Index into [`SimulationRun::paths`] when planning succeeded.
    pub path_index: Option<usize>,
    #[serde(skip)]
    pub timing: PlanTiming,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u64,
    pub time: f64,
    pub state: RobotState,
    pub map_version: u64,
    /// Path being tracked, or `None` after a planning failure.
    pub path_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    GoalReached,
    PlanningFailed,
    Timeout,
}

/// Everything logged by one run.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationRun {
    pub scenario: String,
    pub planner: PlannerKind,
    pub start: Point2,
    pub target: Point2,
    /// Planning margin the run used.
    pub clearance: f64,
    pub status: RunStatus,
    pub goal_reached_time: Option<f64>,
    pub replans: Vec<ReplanRecord>,
    pub paths: Vec<Path>,
    pub ticks: Vec<TickRecord>,
    /// The map after each version change, indexed by version order.
    #[serde(skip)]
    pub maps: Vec<PolygonMap>,
}

impl SimulationRun {
    pub fn plan_calls(&self) -> usize {
        self.replans.len()
    }

    /// Map in force at `version`.
    pub fn map_at(&self, version: u64) -> Option<&PolygonMap> {
        self.maps.iter().find(|m| m.version() == version)
    }

    pub fn timings(&self) -> Vec<PlanTiming> {
        self.replans.iter().map(|r| r.timing).collect()
    }
}

/// Sub-path from the robot's projection onto `path` to its end.
pub fn remaining_path(path: &Path, state: &RobotState) -> Path {
    let (s, _) = path.project(state.position);
    path.suffix_from(s)
}

struct PlannerRun {
    status: PlanStatus,
    path: Option<Path>,
    counters: Option<SearchCounters>,
    grid_expanded: Option<u64>,
    timing: PlanTiming,
}

fn run_planner(
    planner: PlannerKind,
    map: &PolygonMap,
    from: Point2,
    to: Point2,
    cfg: &SimulationConfig,
    grid_resolution: f64,
) -> PlannerRun {
    let prep = Instant::now();
    let padded = if cfg.clearance > 0.0 { map.inflated(cfg.clearance) } else { Ok(map.clone()) };
    let padded = match padded {
        Ok(m) => m,
        Err(e) => {
            return PlannerRun {
                status: PlanStatus::InvalidQuery { reason: format!("padding the map failed: {e}") },
                path: None,
                counters: None,
                grid_expanded: None,
                timing: PlanTiming::default(),
            }
        }
    };
    let mut timing = PlanTiming { prepare_seconds: prep.elapsed().as_secs_f64(), plan_seconds: 0.0 };
    let fail = |e: PlanError| match e {
        PlanError::NoPath { .. } => PlanStatus::NoPath,
        PlanError::InvalidQuery(reason) => PlanStatus::InvalidQuery { reason },
    };
    match planner {
        PlannerKind::MinimalConstruct => {
            let t0 = Instant::now();
            let out = minimal_construct::plan(&padded, from, to);
            timing.plan_seconds = t0.elapsed().as_secs_f64();
            match out {
                Ok(o) => PlannerRun {
                    status: PlanStatus::Ok { length: o.path.length(), segments: o.path.segments() },
                    counters: Some(*o.counters()),
                    path: Some(o.path),
                    grid_expanded: None,
                    timing,
                },
                Err(e) => {
                    let counters = match &e {
                        PlanError::NoPath { counters } => Some(*counters),
                        PlanError::InvalidQuery(_) => None,
                    };
                    PlannerRun { status: fail(e), path: None, counters, grid_expanded: None, timing }
                }
            }
        }
        PlannerKind::VisibilityGraph => {
            let t0 = Instant::now();
            let out = oracle_shortest_path(&padded, from, to);
            timing.plan_seconds = t0.elapsed().as_secs_f64();
            match out {
                Ok(path) => PlannerRun {
                    status: PlanStatus::Ok { length: path.length(), segments: path.segments() },
                    path: Some(path),
                    counters: None,
                    grid_expanded: None,
                    timing,
                },
                Err(e) => PlannerRun { status: fail(e), path: None, counters: None, grid_expanded: None, timing },
            }
        }
        PlannerKind::GridAStar => {
            let t0 = Instant::now();
            let grid = rasterize(&padded, grid_resolution);
            timing.prepare_seconds += t0.elapsed().as_secs_f64();
            let grid = match grid {
                Ok(g) => g,
                Err(e) => {
                    return PlannerRun {
                        status: PlanStatus::InvalidQuery { reason: e.to_string() },
                        path: None,
                        counters: None,
                        grid_expanded: None,
                        timing,
                    }
                }
            };
            let t1 = Instant::now();
            let out = grid_astar(&grid, from, to);
            timing.plan_seconds = t1.elapsed().as_secs_f64();
            match out {
                Ok(p) => PlannerRun {
                    status: PlanStatus::Ok { length: p.path.length(), segments: p.path.segments() },
                    path: Some(p.path),
                    counters: None,
                    grid_expanded: Some(p.expanded),
                    timing,
                },
                Err(crate::error::GridError::NoPath) => PlannerRun {
                    status: PlanStatus::NoPath,
                    path: None,
                    counters: None,
                    grid_expanded: None,
                    timing,
                },
                Err(e) => PlannerRun {
                    status: PlanStatus::InvalidQuery { reason: e.to_string() },
                    path: None,
                    counters: None,
                    grid_expanded: None,
                    timing,
                },
            }
        }
    }
}

/// Runs one scenario to completion with a fixed time step.
///
/// Each tick: apply the events that are due; replan from the robot's
/// position if the map version changed or the untraversed path now collides;
/// stop if the goal is within tolerance; otherwise take one pure-pursuit
/// step. A planning failure halts the robot and ends the run.
#[allow(clippy::too_many_arguments)]
pub fn run_scenario(
    name: &str,
    map0: &PolygonMap,
    script: &ScenarioScript,
    start: Point2,
    target: Point2,
    planner: PlannerKind,
    cfg: &SimulationConfig,
) -> Result<SimulationRun, ScenarioError> {
    cfg.pursuit.validate()?;
    if !(cfg.timeout.is_finite() && cfg.timeout > 0.0) {
        return Err(ScenarioError::InvalidSetting("timeout must be positive"));
    }
    if !(cfg.clearance.is_finite() && cfg.clearance >= 0.0) {
        return Err(ScenarioError::InvalidSetting("clearance must be non-negative"));
    }
    script.dry_run(map0)?;
    let grid_resolution = cfg.grid_resolution.unwrap_or_else(|| default_resolution(map0));
    if !(grid_resolution.is_finite() && grid_resolution > 0.0) {
        return Err(ScenarioError::InvalidSetting("grid resolution must be positive"));
    }

    let pursuit = &cfg.pursuit;
    let dt = pursuit.dt;
    let max_ticks = (cfg.timeout / dt).ceil() as u64;
    let mut run = SimulationRun {
        scenario: name.to_string(),
        planner,
        start,
        target,
        clearance: cfg.clearance,
        status: RunStatus::Timeout,
        goal_reached_time: None,
        replans: Vec::new(),
        paths: Vec::new(),
        ticks: Vec::new(),
        maps: vec![map0.clone()],
    };
    let mut map = map0.clone();
    let mut pending = script.events().iter().peekable();
    let mut state = RobotState::new(start, cfg.initial_heading.unwrap_or(0.0), 0.0);
    let mut tracker: Option<PathTracker> = None;
    let mut planned_version: Option<u64> = None;

    for tick in 0..=max_ticks {
        let time = tick as f64 * dt;
        while let Some(e) = pending.next_if(|e| e.time <= time + 1e-9) {
            map = apply_event(&map, e).expect("checked by dry run");
            run.maps.push(map.clone());
        }

        let changed = planned_version != Some(map.version());
        let collides = tracker.as_ref().is_some_and(|t| path_collides(&map, &t.remaining()));
        if changed || collides {
            let trigger = match (planned_version.is_none(), changed, collides) {
                (true, _, _) => ReplanTrigger::Initial,
                (false, true, true) => ReplanTrigger::MapChangedAndCollision,
                (false, true, false) => ReplanTrigger::MapChanged,
                _ => ReplanTrigger::PathCollision,
            };
            let out = run_planner(planner, &map, state.position, target, cfg, grid_resolution);
            planned_version = Some(map.version());
            let path_index = out.path.map(|p| {
                if run.paths.is_empty() && cfg.initial_heading.is_none() {
                    if let Some(w) = p.waypoints().get(1) {
                        let d = *w - p.start();
                        state = RobotState::new(state.position, d.y.atan2(d.x), state.speed);
                    }
                }
                run.paths.push(p.clone());
                tracker = Some(PathTracker::new(p).expect("non-empty"));
                run.paths.len() - 1
            });
            run.replans.push(ReplanRecord {
                tick,
                time,
                trigger,
                origin: state.position,
                map_version: map.version(),
                status: out.status,
                counters: out.counters,
                grid_expanded: out.grid_expanded,
                path_index,
                timing: out.timing,
            });
            if path_index.is_none() {
                run.ticks.push(TickRecord { tick, time, state, map_version: map.version(), path_index: None });
                run.status = RunStatus::PlanningFailed;
                return Ok(run);
            }
        }

        run.ticks.push(TickRecord {
            tick,
            time,
            state,
            map_version: map.version(),
            path_index: Some(run.paths.len() - 1),
        });

        if state.position.distance(target) <= pursuit.goal_tolerance {
            run.status = RunStatus::GoalReached;
            run.goal_reached_time = Some(time);
            return Ok(run);
        }
        let tracker = tracker.as_mut().expect("planned above");
        let goal = tracker.update(&state, pursuit);
        let cmd = pursuit_command(&state, goal, pursuit);
        state = step_kinematics(&state, cmd, dt);
    }
    Ok(run)
}

/// Per-run summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub scenario: String,
    pub planner: PlannerKind,
    pub status: RunStatus,
    pub plan_calls: usize,
    /// Planner wall time of every call, seconds.
    pub replan_seconds: Vec<f64>,
    pub total_planning_seconds: f64,
    pub path_lengths: Vec<f64>,
    pub segment_counts: Vec<usize>,
    pub goal_reached_time: Option<f64>,
    pub intersection_tests: Vec<u64>,
}

impl RunMetrics {
    pub fn from_run(run: &SimulationRun) -> Self {
        let ok = |r: &&ReplanRecord| matches!(r.status, PlanStatus::Ok { .. });
        Self {
            scenario: run.scenario.clone(),
            planner: run.planner,
            status: run.status,
            plan_calls: run.plan_calls(),
            replan_seconds: run.replans.iter().map(|r| r.timing.plan_seconds).collect(),
            total_planning_seconds: run.replans.iter().map(|r| r.timing.plan_seconds).sum(),
            path_lengths: run.replans.iter().filter(ok).filter_map(|r| match r.status {
                PlanStatus::Ok { length, .. } => Some(length),
                _ => None,
            }).collect(),
            segment_counts: run.replans.iter().filter_map(|r| match r.status {
                PlanStatus::Ok { segments, .. } => Some(segments),
                _ => None,
            }).collect(),
            goal_reached_time: run.goal_reached_time,
            intersection_tests: run
                .replans
                .iter()
                .filter_map(|r| r.counters.map(|c| c.intersection_tests))
                .collect(),
        }
    }
}

/// A run's metrics divided by the first (reference) run's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRatios {
    pub planner: PlannerKind,
    pub replan_seconds: Vec<f64>,
    pub total_planning_seconds: f64,
    pub path_lengths: Vec<f64>,
    pub goal_reached_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub runs: Vec<RunMetrics>,
    /// `ratios[i]` is run `i` relative to run 0.
    pub ratios: Vec<RunRatios>,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        a / b
    }
}

/// Compares runs of the same scenario, using the first as the reference.
pub fn compare_runs(runs: &[SimulationRun]) -> Result<MetricReport, CompareError> {
    if runs.len() < 2 {
        return Err(CompareError::TooFewRuns);
    }
    let reference = &runs[0];
    for r in &runs[1..] {
        if r.scenario != reference.scenario || r.start != reference.start || r.target != reference.target {
            return Err(CompareError::MismatchedScenarios(reference.scenario.clone(), r.scenario.clone()));
        }
    }
    let metrics: Vec<RunMetrics> = runs.iter().map(RunMetrics::from_run).collect();
    let base = &metrics[0];
    let ratios = metrics
        .iter()
        .map(|m| RunRatios {
            planner: m.planner,
            replan_seconds: m.replan_seconds.iter().zip(&base.replan_seconds).map(|(a, b)| ratio(*a, *b)).collect(),
            total_planning_seconds: ratio(m.total_planning_seconds, base.total_planning_seconds),
            path_lengths: m.path_lengths.iter().zip(&base.path_lengths).map(|(a, b)| ratio(*a, *b)).collect(),
            goal_reached_time: m.goal_reached_time.zip(base.goal_reached_time).map(|(a, b)| ratio(a, b)),
        })
        .collect();
    Ok(MetricReport { runs: metrics, ratios })
}
