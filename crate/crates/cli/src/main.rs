//! `ngma`: run benchmark sweeps, solve preset problems and print oracle values.
//!
//! Exit codes: 0 on success, 1 when the solver reports infeasibility, 2 on configuration errors.

use clap::{Args, Parser, Subcommand};
use ngma_core::bench::{
    oracle_default, parse_config, parse_schemes, problem_preset, run_configured_sweep, solve_default, ScenarioConfig, SweepReport, PRESETS,
    PROBLEM_PRESETS,
};
use ngma_core::error::Error;
use ngma_core::problems::{Solution, Status};
use ngma_core::solvers::SolverOptions;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ngma", version, about = "Resource allocation solvers and the IRS-NOMA benchmark sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write the CSV report.
    RunSweep(SweepArgs),
    /// Solve a preset problem with its default solver.
    Solve(ProblemArgs),
    /// Print the enumeration reference value of a preset problem.
    Oracle(ProblemArgs),
    /// List compiled presets.
    ListPresets,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario preset applied before the config file.
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated scheme list overriding the configured one.
    #[arg(long)]
    scheme: Option<String>,
    /// Worker threads; defaults to every core. Output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Fill the runtime_ms column (makes output machine-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem preset name.
    #[arg(long)]
    preset: String,
    /// Rejected: problem commands take presets only.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::Solver(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::config(format!("--out {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_config(args: &SweepArgs) -> Result<ScenarioConfig, Failure> {
    let base = match &args.preset {
        Some(name) => ScenarioConfig::preset(name)
            .ok_or_else(|| Failure::config(format!("--preset: unknown scenario preset {name:?}; see list-presets")))?,
        None => ScenarioConfig::default(),
    };
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::config(format!("--config {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text, base)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(list) = &args.scheme {
        cfg.schemes = parse_schemes(list).map_err(|m| Failure::config(format!("--scheme: {m}")))?;
    }
    if args.jobs == Some(0) {
        return Err(Failure::config("--jobs: must be at least 1"));
    }
    Ok(cfg)
}

fn summary(report: &SweepReport) -> String {
    let cfg = &report.config;
    let mut s = format!("# trials = {}\n", cfg.trials);
    for &scheme in &cfg.schemes {
        let means: Vec<String> = (0..cfg.p_max_dbm_list.len()).map(|i| format!("{:.4}", report.mean(scheme, i))).collect();
        s += &format!("# mean {} = {}\n", scheme.name(), means.join(", "));
    }
    if report.partial {
        s += "# some rows failed; see the status column\n";
    }
    s
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let cfg = sweep_config(args)?;
    let report = run_configured_sweep(&cfg, args.jobs)?;
    emit(&args.out, &report.to_csv(args.timing))?;
    eprint!("{}", summary(&report));
    Ok(())
}

fn preset(args: &ProblemArgs) -> Result<ngma_core::problems::ProblemInstance, Failure> {
    if args.config.is_some() {
        return Err(Failure::config("--config: problem commands take --preset only"));
    }
    problem_preset(&args.preset).ok_or_else(|| Failure::config(format!("--preset: unknown problem preset {:?}; see list-presets", args.preset)))
}

fn opt(v: Option<f64>) -> String {
    v.map(|g| format!("{g:e}")).unwrap_or_else(|| "none".into())
}

fn solution_lines(name: &str, sol: &Solution) -> String {
    let x: Vec<String> = sol.x.iter().map(|v| format!("{v:e}")).collect();
    format!(
        "problem = {name}\nstatus = {}\nobjective = {:e}\nmax_residual = {:e}\ngap = {}\niterations = {}\nx = {}\n",
        sol.status,
        sol.objective,
        sol.max_residual,
        opt(sol.gap),
        sol.iterations,
        x.join(", ")
    )
}

fn infeasible(sol: &Solution) -> Result<(), Failure> {
    if sol.status == Status::Infeasible {
        return Err(Failure { code: 1, message: "solver reports the problem infeasible".into() });
    }
    Ok(())
}

fn solve(args: &ProblemArgs) -> Result<(), Failure> {
    let inst = preset(args)?;
    let sol = solve_default(&inst, &SolverOptions::default())?;
    emit(&args.out, &solution_lines(&args.preset, &sol))?;
    infeasible(&sol)
}

fn oracle(args: &ProblemArgs) -> Result<(), Failure> {
    let inst = preset(args)?;
    let rep = oracle_default(&inst, &SolverOptions::default())?;
    let text = format!(
        "problem = {}\nvalue = {:e}\nstatus = {}\nevaluated = {}\nresolution = {}\n",
        args.preset,
        rep.solution.objective,
        rep.solution.status,
        rep.evaluated,
        opt(rep.resolution)
    );
    emit(&args.out, &text)?;
    infeasible(&rep.solution)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RunSweep(a) => run_sweep(a),
        Command::Solve(a) => solve(a),
        Command::Oracle(a) => oracle(a),
        Command::ListPresets => {
            PRESETS.iter().chain(PROBLEM_PRESETS.iter()).for_each(|p| println!("{p}"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
