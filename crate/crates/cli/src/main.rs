use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bimatrix::exact::lemke::{lemke_howson, LemkeConfig};
use bimatrix::exact::support::{support_enumeration, SupportEnumConfig};
use bimatrix::fileio;
use bimatrix::game::epsilon_of;
use bimatrix::gen::{self, GameSpec};
use bimatrix::run::RunStatus;
use clap::{Args, Parser, Subcommand};

use bimatrix_cli::config;
use bimatrix_cli::harness::{self, BenchPlan};
use bimatrix_cli::registry::{execute, AlgId, AlgParams};

#[derive(Parser)]
#[command(
    name = "bimatrix",
    version,
    about = "Equilibrium solvers, learning dynamics, and benchmarks for bimatrix games"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand or execute a benchmark config
    Bench {
        #[command(subcommand)]
        action: BenchCmd,
    },
    /// Run one algorithm on one game file
    Solve(SolveArgs),
    /// Score a strategy profile against a game
    Metrics {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Write a generated or fixture game to a file
    Gen(GenArgs),
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Print the deterministic task expansion of a config
    Plan {
        #[arg(long)]
        config: PathBuf,
    },
    /// Execute a config and write records.csv and tables.md
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 means one per core (overrides the config)
        #[arg(long)]
        jobs: Option<usize>,
        /// Minimum per-task timeout in seconds (overrides the config)
        #[arg(long)]
        timeout_floor: Option<f64>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    /// Algorithm id; any benchmark id, or `lh` / `support-enum`
    #[arg(long)]
    alg: String,
    /// Descent stopping margin for ts07 and dfm-13
    #[arg(long)]
    delta: Option<f64>,
    /// Seed for randomized initialization
    #[arg(long)]
    seed: Option<u64>,
    /// Round count for the learning dynamics
    #[arg(long)]
    rounds: Option<usize>,
    /// Write the solution profile here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// `zero-sum` or `general` (exclusive with --fixture)
    #[arg(long)]
    scenario: Option<String>,
    /// Named fixture (exclusive with --scenario)
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, default_value_t = 10)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Bench { action } => match action {
            BenchCmd::Plan { config } => {
                let plan = load_plan(&config, None, None)?;
                print_plan(&plan);
                Ok(ExitCode::SUCCESS)
            }
            BenchCmd::Run {
                config,
                out,
                jobs,
                timeout_floor,
            } => {
                let plan = load_plan(&config, jobs, timeout_floor)?;
                print_plan(&plan);
                let summary = harness::run(&plan, &out).map_err(|e| e.to_string())?;
                let failed = summary
                    .records
                    .iter()
                    .filter(|r| r.status != RunStatus::Ok)
                    .count();
                println!("records: {}", summary.csv_path.display());
                println!("tables:  {}", summary.tables_path.display());
                println!("records digest: {}", summary.records_digest);
                if failed > 0 {
                    println!(
                        "{failed} of {} tasks did not finish with status ok",
                        summary.records.len()
                    );
                    return Ok(ExitCode::from(EXIT_PARTIAL));
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Solve(args) => solve(&args),
        Cmd::Metrics { game, profile } => {
            let game = fileio::read_game(&game).map_err(|e| e.to_string())?;
            let profile = fileio::read_profile(&profile).map_err(|e| e.to_string())?;
            let report = epsilon_of(&game, &profile).map_err(|e| e.to_string())?;
            println!("row regret:     {}", report.regret_row);
            println!("column regret:  {}", report.regret_col);
            println!("epsilon:        {}", report.epsilon);
            println!("ws epsilon:     {}", report.ws_epsilon);
            println!("exploitability: {}", report.exploitability);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen(args) => generate(&args),
    }
}

fn load_plan(
    path: &Path,
    jobs: Option<usize>,
    timeout_floor: Option<f64>,
) -> Result<BenchPlan, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let (mut cfg, warnings) = config::parse(&text).map_err(|e| e.to_string())?;
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if let Some(f) = timeout_floor {
        if !(f > 0.0) {
            return Err("--timeout-floor must be positive".into());
        }
        cfg.timeout_floor_s = f;
    }
    Ok(harness::plan(cfg, warnings))
}

fn print_plan(plan: &BenchPlan) {
    for w in &plan.warnings {
        eprintln!("warning: {w}");
    }
    let cfg = &plan.config;
    println!("config digest: {}", cfg.digest());
    for &scenario in &cfg.scenarios {
        for &size in &cfg.sizes {
            let seeds = cfg.seeds_for(size);
            println!(
                "{} {size}x{size}: {} algorithms x {seeds} seeds = {} tasks",
                scenario.as_str(),
                cfg.algorithms.len(),
                cfg.algorithms.len() as u64 * seeds
            );
        }
    }
    println!("total: {} tasks", plan.tasks.len());
}

fn solve(args: &SolveArgs) -> Result<ExitCode, String> {
    let game = fileio::read_game(&args.game).map_err(|e| e.to_string())?;

    let (profile, status, label) = match args.alg.as_str() {
        "lh" => {
            let out = lemke_howson(&game, 1, &LemkeConfig::default()).map_err(|e| e.to_string())?;
            println!("pivots: {}", out.pivots);
            (out.profile, RunStatus::Ok, "lh".to_string())
        }
        "support-enum" => {
            let sweep = support_enumeration(&game, &SupportEnumConfig::default());
            println!(
                "equilibria found: {} ({} support pairs examined)",
                sweep.equilibria.len(),
                sweep.pairs_examined
            );
            let first = sweep
                .equilibria
                .into_iter()
                .next()
                .ok_or("no equilibrium found")?;
            (first, RunStatus::Ok, "support-enum".to_string())
        }
        id => {
            let alg = AlgId::parse(id)
                .ok_or_else(|| format!("unknown algorithm `{id}`; see `bimatrix bench` ids"))?;
            let mut params = AlgParams::default();
            if let Some(d) = args.delta {
                if !(d > 0.0 && d < 1.0) {
                    return Err("--delta must lie in (0, 1)".into());
                }
                params.delta = d;
                params.delta_half = d.min(0.5);
            }
            if let Some(s) = args.seed {
                params.init_seed = s;
            }
            if let Some(t) = args.rounds {
                if t == 0 {
                    return Err("--rounds must be at least 1".into());
                }
                params.t_rounds = t;
            }
            let outcome = execute(alg, &game, &params);
            let profile = outcome
                .profile
                .ok_or_else(|| format!("{id} failed with status {}", outcome.status.as_str()))?;
            (profile, outcome.status, id.to_string())
        }
    };

    let report = epsilon_of(&game, &profile).map_err(|e| e.to_string())?;
    println!("algorithm:  {label}");
    println!("status:     {}", status.as_str());
    println!("epsilon:    {}", report.epsilon);
    println!("ws epsilon: {}", report.ws_epsilon);
    if let Some(out) = &args.out {
        fileio::write_profile(&profile, out).map_err(|e| e.to_string())?;
        println!("profile written to {}", out.display());
    }
    if status == RunStatus::Ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_PARTIAL))
    }
}

fn generate(args: &GenArgs) -> Result<ExitCode, String> {
    let spec = match (&args.scenario, &args.fixture) {
        (Some(_), Some(_)) => return Err("--scenario and --fixture are exclusive".into()),
        (None, None) => return Err("one of --scenario or --fixture is required".into()),
        (None, Some(name)) => GameSpec::fixture(name),
        (Some(s), None) => match s.as_str() {
            "zero-sum" => GameSpec::zero_sum(args.rows, args.cols, args.seed),
            "general" => GameSpec::general(args.rows, args.cols, args.seed),
            other => return Err(format!("unknown scenario `{other}`")),
        },
    };
    let game = gen::generate(&spec).map_err(|e| e.to_string())?;
    fileio::write_game(&game, &args.out).map_err(|e| e.to_string())?;
    println!(
        "wrote {}x{} game to {}",
        game.rows(),
        game.cols(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}
