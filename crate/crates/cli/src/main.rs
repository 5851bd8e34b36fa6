use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polynav::simulation::PlannerKind;
use polynav::Point2;
use polynav_cli::commands::{
    bench_command, plan_command, simulate_command, validate_command, BenchArgs, CliError, PlanArgs, PlanInput,
    SimulateArgs,
};

#[derive(Parser)]
#[command(name = "polynav", version, about = "Shortest-path planning on polygonal maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlannerArg {
    Mc,
    Grid,
    Oracle,
}

impl From<PlannerArg> for PlannerKind {
    fn from(p: PlannerArg) -> Self {
        match p {
            PlannerArg::Mc => PlannerKind::MinimalConstruct,
            PlannerArg::Grid => PlannerKind::GridAStar,
            PlannerArg::Oracle => PlannerKind::VisibilityGraph,
        }
    }
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Point2::try_new(x, y).map_err(|e| e.to_string())
}

fn parse_resolution(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err("must be a positive number".into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan once and render the result.
    Plan {
        /// Map or scenario file.
        #[arg(required_unless_present = "seed", conflicts_with = "seed")]
        file: Option<PathBuf>,
        /// Plan on a seeded random map instead of a file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        start: Option<Point2>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        target: Option<Point2>,
        /// Repeat to overlay several planners.
        #[arg(long, value_enum, default_values_t = vec![PlannerArg::Mc])]
        planner: Vec<PlannerArg>,
        #[arg(long, value_parser = parse_resolution)]
        grid_resolution: Option<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a scenario with replanning and render each plan.
    Simulate {
        scenario: PathBuf,
        /// Repeat to run several planners; defaults to the scenario's own.
        #[arg(long, value_enum)]
        planner: Vec<PlannerArg>,
        #[arg(long, value_parser = parse_resolution)]
        grid_resolution: Option<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Time planners over scenarios and print the summary tables.
    Bench {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Defaults to mc and grid.
        #[arg(long, value_enum)]
        planner: Vec<PlannerArg>,
        #[arg(long, value_parser = parse_resolution)]
        grid_resolution: Option<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check map and scenario files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let kinds = |ps: Vec<PlannerArg>| ps.into_iter().map(PlannerKind::from).collect::<Vec<_>>();
    match cli.command {
        Command::Plan { file, seed, start, target, planner, grid_resolution, out } => {
            let input = match (file, seed) {
                (Some(f), None) => PlanInput::File(f),
                (None, Some(s)) => PlanInput::Random(s),
                _ => return Err(CliError::Usage("give a file or --seed".into())),
            };
            plan_command(&PlanArgs { input, start, target, planners: kinds(planner), grid_resolution, out })
        }
        Command::Simulate { scenario, planner, grid_resolution, out } => {
            simulate_command(&SimulateArgs { scenario, planners: kinds(planner), grid_resolution, out }).map(|_| ())
        }
        Command::Bench { scenarios, reps, planner, grid_resolution, out } => {
            bench_command(&BenchArgs { scenarios, reps, planners: kinds(planner), grid_resolution, out })
        }
        Command::Validate { files } => validate_command(&files),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
