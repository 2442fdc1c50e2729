use std::path::PathBuf;
use std::process::ExitCode;

use bohr_cli::{hj_search, run, CliError, Command, LoadedConfig, DEFAULT_NODE_BUDGET, SEED_ENV};
use clap::{Args, Parser, Subcommand};

/// Desk-scale chessboard colorings and their verifiers.
#[derive(Parser)]
#[command(name = "bohr", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Artifact directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derived parameters and the divisibility report.
    Params(RunArgs),
    /// Generate and export the random board.
    Board(RunArgs),
    /// Longest monochromatic progressions per difference.
    Scan(RunArgs),
    /// Pigeonhole return certificate for (x, y).
    ReturnCert(RunArgs),
    /// Divisibility lemma checks for one y.
    Eta(RunArgs),
    /// Orbit census and union bound.
    OrbitCensus(RunArgs),
    /// Trace the return line through the board.
    Trace(RunArgs),
    /// Half-interval coloring scan.
    Classic(RunArgs),
    /// Hales-Jewett line-free search.
    Hj {
        #[command(subcommand)]
        action: HjAction,
    },
}

#[derive(Subcommand)]
enum HjAction {
    /// Search {0,1,2}^d for a coloring without monochromatic lines.
    Search {
        #[arg(short = 'd')]
        dim: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (command, args) = match cli.command {
        Cmd::Params(a) => (Command::Params, a),
        Cmd::Board(a) => (Command::Board, a),
        Cmd::Scan(a) => (Command::Scan, a),
        Cmd::ReturnCert(a) => (Command::ReturnCert, a),
        Cmd::Eta(a) => (Command::Eta, a),
        Cmd::OrbitCensus(a) => (Command::OrbitCensus, a),
        Cmd::Trace(a) => (Command::Trace, a),
        Cmd::Classic(a) => (Command::Classic, a),
        Cmd::Hj {
            action:
                HjAction::Search {
                    dim,
                    budget,
                    config: Some(path),
                    out,
                },
        } => {
            let mut loaded = LoadedConfig::from_path(&path)?;
            if dim.is_some() {
                loaded.config.hj_d = dim;
            }
            if budget.is_some() {
                loaded.config.node_budget = budget;
            }
            return finish(Command::Hj, loaded, out);
        }
        Cmd::Hj {
            action:
                HjAction::Search {
                    dim,
                    budget,
                    config: None,
                    out,
                },
        } => {
            let d = dim.ok_or_else(|| CliError::Config("missing `-d`".into()))?;
            let text = hj_search(d, budget.unwrap_or(DEFAULT_NODE_BUDGET));
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(e.to_string()))?;
                std::fs::write(dir.join("hj.txt"), &text).map_err(|e| CliError::Io(e.to_string()))?;
            }
            print!("{text}");
            return Ok(0);
        }
    };
    let loaded = LoadedConfig::from_path(&args.config)?;
    finish(command, loaded, args.out)
}

fn finish(command: Command, mut loaded: LoadedConfig, out: Option<PathBuf>) -> Result<i32, CliError> {
    let env_seed = std::env::var(SEED_ENV).ok();
    loaded.config.apply_seed_override(env_seed.as_deref())?;
    let outcome = run(command, &loaded, out.as_deref())?;
    print!("{}", outcome.stdout);
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
