//! Subcommand bodies, kept out of `main` so tests can drive them directly.

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use polynav::baseline::{default_resolution, grid_astar, oracle_shortest_path, rasterize};
use polynav::random_map::{random_instance, RandomMapConfig};
use polynav::simulation::{compare_runs, run_scenario, PlannerKind, RunStatus, SimulationRun};
use polynav::{minimal_construct, Path, Point2, PolygonMap, SearchCounters};
use serde::Serialize;
use thiserror::Error;

use crate::bench::{format_tables, run_benchmark, BenchOptions};
use crate::format::{load_map, load_scenario, FormatError, MapFile, Scenario};
use crate::render::{write_svg, LabeledPath, Scene};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Run(String),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit code: 3 parse, 4 validation, 5 run failure, 2 usage,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(FormatError::Parse { .. }) => 3,
            CliError::Format(e) if e.is_validation() => 4,
            CliError::Format(_) => 1,
            CliError::Run(_) => 5,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

fn write_file(path: &FsPath, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn ensure_dir(dir: &FsPath) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Where `plan` gets its query from.
pub enum PlanInput {
    File(PathBuf),
    Random(u64),
}

pub struct PlanArgs {
    pub input: PlanInput,
    pub start: Option<Point2>,
    pub target: Option<Point2>,
    pub planners: Vec<PlannerKind>,
    pub grid_resolution: Option<f64>,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct PlanResult {
    planner: PlannerKind,
    status: String,
    length: Option<f64>,
    segments: Option<usize>,
    waypoints: Vec<Point2>,
    counters: Option<SearchCounters>,
    grid_resolution: Option<f64>,
    grid_expanded: Option<u64>,
}

#[derive(Debug, Serialize)]
struct PlanLog {
    name: String,
    start: Point2,
    target: Point2,
    polygons: usize,
    results: Vec<PlanResult>,
}

#[derive(Debug, Serialize)]
struct PlanTimingLog {
    planner: PlannerKind,
    plan_seconds: f64,
    prepare_seconds: f64,
}

fn is_scenario_text(text: &str) -> bool {
    text.parse::<toml::Table>().map(|t| t.contains_key("map")).unwrap_or(false)
}

/// One-shot planning on a map, scenario or random instance; writes
/// `<name>.json`, `<name>-timings.json` and `<name>.svg` under `out`.
pub fn plan_command(args: &PlanArgs) -> Result<(), CliError> {
    let (name, map, mut start, mut target) = match &args.input {
        PlanInput::Random(seed) => {
            let inst = random_instance(*seed, &RandomMapConfig::default());
            (format!("random-{seed}"), inst.map, Some(inst.start), Some(inst.target))
        }
        PlanInput::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|source| CliError::Format(FormatError::Io { path: path.clone(), source }))?;
            let stem = path.file_stem().map_or("plan".to_string(), |s| s.to_string_lossy().to_string());
            if is_scenario_text(&text) {
                let sc = load_scenario(path)?;
                (sc.name, sc.map, Some(sc.start), Some(sc.target))
            } else {
                (stem.trim_end_matches(".map").to_string(), load_map(path)?.map, None, None)
            }
        }
    };
    if args.start.is_some() {
        start = args.start;
    }
    if args.target.is_some() {
        target = args.target;
    }
    let (Some(start), Some(target)) = (start, target) else {
        return Err(CliError::Usage("a map file needs --start and --target".into()));
    };
    ensure_dir(&args.out)?;

    let mut results = Vec::new();
    let mut timings = Vec::new();
    let mut labeled = Vec::new();
    let mut graph_edges = Vec::new();
    let mut failed = Vec::new();
    for &planner in &args.planners {
        let mut result = PlanResult {
            planner,
            status: "ok".into(),
            length: None,
            segments: None,
            waypoints: Vec::new(),
            counters: None,
            grid_resolution: None,
            grid_expanded: None,
        };
        let mut timing = PlanTimingLog { planner, plan_seconds: 0.0, prepare_seconds: 0.0 };
        let path: Result<Path, String> = match planner {
            PlannerKind::MinimalConstruct => {
                let t0 = std::time::Instant::now();
                let out = minimal_construct::plan(&map, start, target);
                timing.plan_seconds = t0.elapsed().as_secs_f64();
                out.map(|o| {
                    result.counters = Some(*o.counters());
                    graph_edges = o.graph.edge_segments();
                    o.path
                })
                .map_err(|e| e.to_string())
            }
            PlannerKind::VisibilityGraph => {
                let t0 = std::time::Instant::now();
                let out = oracle_shortest_path(&map, start, target);
                timing.plan_seconds = t0.elapsed().as_secs_f64();
                out.map_err(|e| e.to_string())
            }
            PlannerKind::GridAStar => {
                let res = args.grid_resolution.unwrap_or_else(|| default_resolution(&map));
                result.grid_resolution = Some(res);
                let t0 = std::time::Instant::now();
                let grid = rasterize(&map, res);
                timing.prepare_seconds = t0.elapsed().as_secs_f64();
                let t1 = std::time::Instant::now();
                let out = grid.and_then(|g| grid_astar(&g, start, target));
                timing.plan_seconds = t1.elapsed().as_secs_f64();
                out.map(|p| {
                    result.grid_expanded = Some(p.expanded);
                    p.path
                })
                .map_err(|e| e.to_string())
            }
        };
        match path {
            Ok(p) => {
                result.length = Some(p.length());
                result.segments = Some(p.segments());
                result.waypoints = p.waypoints().to_vec();
                labeled.push(LabeledPath { planner, path: p });
            }
            Err(e) => {
                failed.push(format!("{}: {e}", planner.short_name()));
                result.status = e;
            }
        }
        println!(
            "{:<7} {:>10} {:>9} {:>12.6} ms",
            planner.short_name(),
            result.length.map_or("-".into(), |l| format!("{l:.4}")),
            result.segments.map_or("-".into(), |s| s.to_string()),
            timing.plan_seconds * 1e3
        );
        results.push(result);
        timings.push(timing);
    }
    let log = PlanLog { name: name.clone(), start, target, polygons: map.len(), results };
    write_file(&args.out.join(format!("{name}.json")), &to_json(&log))?;
    write_file(&args.out.join(format!("{name}-timings.json")), &to_json(&timings))?;
    let scene = Scene {
        title: name.clone(),
        map: Some(&map),
        graph_edges,
        paths: labeled,
        start: Some(start),
        target: Some(target),
        ..Default::default()
    };
    let svg = args.out.join(format!("{name}.svg"));
    write_svg(&scene, &svg).map_err(|source| CliError::Io { path: svg, source })?;
    if !failed.is_empty() {
        return Err(CliError::Run(format!("planning failed: {}", failed.join("; "))));
    }
    Ok(())
}

pub struct SimulateArgs {
    pub scenario: PathBuf,
    pub planners: Vec<PlannerKind>,
    pub grid_resolution: Option<f64>,
    pub out: PathBuf,
}

fn explored_edges(run: &SimulationRun, index: usize) -> Vec<(Point2, Point2)> {
    let record = &run.replans[index];
    if run.planner != PlannerKind::MinimalConstruct {
        return Vec::new();
    }
    let Some(map) = run.map_at(record.map_version) else { return Vec::new() };
    // repeat the (deterministic) search to recover the explored graph
    padded_for_render(map, run)
        .and_then(|m| minimal_construct::plan(&m, record.origin, run.target).ok())
        .map(|o| o.graph.edge_segments())
        .unwrap_or_default()
}

fn padded_for_render(map: &PolygonMap, run: &SimulationRun) -> Option<PolygonMap> {
    let c = run.clearance;
    if c > 0.0 {
        map.inflated(c).ok()
    } else {
        Some(map.clone())
    }
}

fn render_run(run: &SimulationRun, out: &FsPath) -> Result<(), CliError> {
    let stem = format!("{}-{}", run.scenario, run.planner.short_name());
    for (i, record) in run.replans.iter().enumerate() {
        let map = run.map_at(record.map_version).expect("every version is stored");
        let trajectory: Vec<Point2> =
            run.ticks.iter().take_while(|t| t.tick <= record.tick).map(|t| t.state.position).collect();
        let scene = Scene {
            title: format!("{} {} plan {}", run.scenario, run.planner.short_name(), i + 1),
            map: Some(map),
            graph_edges: explored_edges(run, i),
            paths: record
                .path_index
                .map(|p| LabeledPath { planner: run.planner, path: run.paths[p].clone() })
                .into_iter()
                .collect(),
            start: Some(run.start),
            target: Some(run.target),
            trajectory,
            robot: Some(record.origin),
        };
        let file = out.join(format!("{stem}-plan-{:02}.svg", i + 1));
        write_svg(&scene, &file).map_err(|source| CliError::Io { path: file, source })?;
    }
    let last = run.ticks.last().expect("at least one tick");
    let scene = Scene {
        title: format!("{} {} final", run.scenario, run.planner.short_name()),
        map: run.map_at(last.map_version),
        paths: run.paths.last().map(|p| LabeledPath { planner: run.planner, path: p.clone() }).into_iter().collect(),
        start: Some(run.start),
        target: Some(run.target),
        trajectory: run.ticks.iter().map(|t| t.state.position).collect(),
        robot: Some(last.state.position),
        ..Default::default()
    };
    let file = out.join(format!("{stem}.svg"));
    write_svg(&scene, &file).map_err(|source| CliError::Io { path: file, source })
}

/// Runs a scenario once per planner; writes the deterministic log, the
/// timings, one SVG per plan call and a final SVG for each.
pub fn simulate_command(args: &SimulateArgs) -> Result<Vec<SimulationRun>, CliError> {
    let sc = load_scenario(&args.scenario)?;
    ensure_dir(&args.out)?;
    let planners = if args.planners.is_empty() {
        vec![sc.planner.unwrap_or(PlannerKind::MinimalConstruct)]
    } else {
        args.planners.clone()
    };
    let mut runs = Vec::new();
    for planner in planners {
        let run = simulate_one(&sc, planner, args.grid_resolution)?;
        let stem = format!("{}-{}", run.scenario, planner.short_name());
        write_file(&args.out.join(format!("{stem}.json")), &to_json(&run))?;
        write_file(&args.out.join(format!("{stem}-timings.json")), &to_json(&run.timings()))?;
        render_run(&run, &args.out)?;
        println!(
            "{:<7} {:?}: {} plan calls, goal time {}",
            planner.short_name(),
            run.status,
            run.plan_calls(),
            run.goal_reached_time.map_or("-".into(), |t| format!("{t:.2} s"))
        );
        runs.push(run);
    }
    if runs.len() > 1 {
        if let Ok(report) = compare_runs(&runs) {
            for r in &report.ratios[1..] {
                println!(
                    "{} / {}: planning time x{:.2}, goal time x{}",
                    r.planner.short_name(),
                    runs[0].planner.short_name(),
                    r.total_planning_seconds,
                    r.goal_reached_time.map_or("-".into(), |x| format!("{x:.3}"))
                );
            }
        }
    }
    if let Some(bad) = runs.iter().find(|r| r.status != RunStatus::GoalReached) {
        return Err(CliError::Run(format!(
            "{} with {} ended as {:?}",
            bad.scenario,
            bad.planner.short_name(),
            bad.status
        )));
    }
    Ok(runs)
}

pub fn simulate_one(sc: &Scenario, planner: PlannerKind, grid_resolution: Option<f64>) -> Result<SimulationRun, CliError> {
    let mut cfg = sc.config.clone();
    if grid_resolution.is_some() {
        cfg.grid_resolution = grid_resolution;
    }
    run_scenario(&sc.name, &sc.map, &sc.script, sc.start, sc.target, planner, &cfg)
        .map_err(|e| CliError::Run(format!("{}: {e}", sc.name)))
}

pub struct BenchArgs {
    pub scenarios: Vec<PathBuf>,
    pub reps: usize,
    pub planners: Vec<PlannerKind>,
    pub grid_resolution: Option<f64>,
    pub out: PathBuf,
}

/// Writes `bench.txt` and `bench.json` under `out` and prints the tables.
pub fn bench_command(args: &BenchArgs) -> Result<(), CliError> {
    let scenarios = args.scenarios.iter().map(|p| load_scenario(p)).collect::<Result<Vec<_>, _>>()?;
    ensure_dir(&args.out)?;
    let planners = if args.planners.is_empty() {
        vec![PlannerKind::MinimalConstruct, PlannerKind::GridAStar]
    } else {
        args.planners.clone()
    };
    let report = run_benchmark(
        &scenarios,
        &BenchOptions { reps: args.reps, planners, grid_resolution: args.grid_resolution },
    );
    let table = format_tables(&report);
    print!("{table}");
    write_file(&args.out.join("bench.txt"), &table)?;
    write_file(&args.out.join("bench.json"), &to_json(&report))?;
    Ok(())
}

/// Loads every file (map or scenario) and reports problems; fails with the
/// first error category seen.
pub fn validate_command(files: &[PathBuf]) -> Result<(), CliError> {
    let mut first_error = None;
    for path in files {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(source) => {
                let e = CliError::Format(FormatError::Io { path: path.clone(), source });
                println!("error {e}");
                first_error.get_or_insert(e);
                continue;
            }
        };
        let outcome = if is_scenario_text(&text) {
            load_scenario(path).map(|sc| {
                format!("{} polygons, {} events", sc.map.len(), sc.script.events().len())
            })
        } else {
            MapFile::parse(&text, path)
                .and_then(|f| f.to_map(path))
                .map(|m| format!("{} polygons, {} vertices", m.len(), m.vertex_count()))
        };
        match outcome {
            Ok(summary) => println!("ok    {}: {summary}", path.display()),
            Err(e) => {
                println!("error {e}");
                first_error.get_or_insert(CliError::Format(e));
            }
        }
    }
    match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
