use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soa_cli::{analyze_run, format_volume_table, replay_run, run_humaneval, run_solve, CliError};
use soa_core::{BackendDescriptor, RunConfig, SolveMode};
use soa_protocol::SolveStatus;

#[derive(Parser)]
#[command(
    name = "soa",
    version,
    about = "Self-organizing agents for function-level code generation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one function spec.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a HumanEval-format benchmark file.
    Humaneval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value = "soa", value_parser = parse_mode)]
        mode: SolveMode,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Per-agent code volume of a finished run.
    Analyze {
        #[arg(long)]
        run: PathBuf,
    },
    /// Re-execute a run from its trace and compare artifacts.
    Replay {
        #[arg(long)]
        run: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 2)]
    max_depth: u32,
    #[arg(long, default_value_t = 8)]
    max_iters: u32,
    #[arg(long, default_value_t = 1)]
    n_tests: usize,
    /// openai, mock:<fixtures.json> or replay:<run dir>
    #[arg(long, default_value = "openai")]
    backend: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    #[arg(long)]
    model: Option<String>,
    /// Directory of prompt templates replacing the built-in pack.
    #[arg(long)]
    prompt_pack: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<SolveMode, String> {
    match s {
        "soa" => Ok(SolveMode::Soa),
        "single" => Ok(SolveMode::Single),
        _ => Err(format!("unknown mode `{s}` (expected soa or single)")),
    }
}

impl RunArgs {
    fn config(&self, mode: SolveMode) -> Result<RunConfig, CliError> {
        let mut backend: BackendDescriptor = self.backend.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        if let BackendDescriptor::Openai { base_url } = &mut backend {
            if let Ok(url) = std::env::var("SOA_BASE_URL") {
                *base_url = url;
            }
        }
        let defaults = RunConfig::default();
        let config = RunConfig {
            mode,
            max_depth: self.max_depth,
            max_iterations: self.max_iters,
            n_validation_tests: self.n_tests,
            seed: self.seed,
            concurrency_limit: self.concurrency,
            backend,
            prompt_pack: self.prompt_pack.clone(),
            model: self.model.clone().unwrap_or(defaults.model.clone()),
            python: std::env::var("SOA_PYTHON").unwrap_or(defaults.python.clone()),
            ..defaults
        };
        Ok(match mode {
            SolveMode::Soa => config,
            SolveMode::Single => config.single_agent(),
        })
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve { spec, run } => {
            let solved = run_solve(&spec, run.config(SolveMode::Soa)?, &run.out)?;
            let r = &solved.result;
            println!("{}", solved.run_dir.display());
            for w in &r.warnings {
                log::warn!("{w}");
            }
            match r.status {
                SolveStatus::Passed => {
                    println!("passed after {} modification round(s)", r.iterations_used);
                    Ok(0)
                }
                SolveStatus::Exhausted => {
                    println!("validation tests still failing after {} round(s)", r.iterations_used);
                    Ok(1)
                }
            }
        }
        Command::Humaneval { data, limit, mode, run } => {
            let bench = run_humaneval(&data, limit, run.config(mode)?, &run.out)?;
            let r = &bench.report;
            println!("{}", bench.run_dir.display());
            println!("pass@1 {} ({}/{})", r.pass_at_1_exact().render(), r.passed, r.total);
            Ok(if r.passed == r.total { 0 } else { 1 })
        }
        Command::Analyze { run } => {
            let rows = analyze_run(&run)?;
            print!("{}", format_volume_table(&rows));
            Ok(0)
        }
        Command::Replay { run } => {
            let replay = replay_run(&run)?;
            println!("{}", replay.run_dir.display());
            if replay.mismatches.is_empty() {
                println!("replay identical");
                Ok(0)
            } else {
                for m in &replay.mismatches {
                    println!("differs: {m}");
                }
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("soa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
