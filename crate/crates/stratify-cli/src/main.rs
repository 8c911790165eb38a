use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stratify::strat_poset::TieRule;
use stratify_cli::{cmd_degree, cmd_hasse, cmd_hilbert, cmd_lspaths, cmd_subduct, cmd_valuate, cmd_validate, CliResult, Output, Workspace};

#[derive(Parser)]
#[command(name = "stratify", version, about = "Computations on bonded stratification posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Asc,
    Desc,
}

#[derive(Args)]
struct WsArgs {
    /// Stratification JSON file, or a bundled example name (gr24, sl3b, ...).
    #[arg(long)]
    strat: String,
    /// Directory of chart files.
    #[arg(long)]
    atlas: Option<PathBuf>,
    /// Graded ring model JSON.
    #[arg(long)]
    ring: Option<PathBuf>,
    /// Tie rule for the default total order.
    #[arg(long, value_enum, default_value = "asc")]
    tie: Tie,
}

#[derive(Subcommand)]
enum Command {
    /// Check the poset axioms and chart bonds.
    Validate(WsArgs),
    /// Emit the bonded Hasse diagram as DOT.
    Hasse {
        #[command(flatten)]
        ws: WsArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Degree from the simplex volumes.
    Degree(WsArgs),
    /// Hilbert function table as CSV.
    Hilbert {
        #[command(flatten)]
        ws: WsArgs,
        #[arg(long, default_value_t = 5)]
        max: u64,
    },
    /// Chain valuations and the quasi-valuation of a polynomial.
    Valuate {
        #[command(flatten)]
        ws: WsArgs,
        #[arg(long)]
        poly: String,
    },
    /// Standard monomial expansion by subduction.
    Subduct {
        #[command(flatten)]
        ws: WsArgs,
        #[arg(long)]
        poly: String,
    },
    /// LS paths, character check and Schubert degree.
    Lspaths {
        /// Cartan type such as A2.
        #[arg(long = "type")]
        ty: String,
        /// Fundamental-weight coefficients, comma separated.
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        degree: u64,
        /// Reduced word such as s1s2; defaults to the longest element.
        #[arg(long)]
        tau: Option<String>,
    },
}

fn workspace(a: &WsArgs) -> CliResult<Workspace> {
    let tie = match a.tie {
        Tie::Asc => TieRule::Ascending,
        Tie::Desc => TieRule::Descending,
    };
    Workspace::load(&a.strat, a.atlas.as_deref(), a.ring.as_deref(), tie)
}

fn run(cli: Cli) -> CliResult<(Output, Option<PathBuf>)> {
    Ok(match cli.command {
        Command::Validate(a) => (cmd_validate(&workspace(&a)?)?, None),
        Command::Hasse { ws, dot } => (cmd_hasse(&workspace(&ws)?)?, dot),
        Command::Degree(a) => (cmd_degree(&workspace(&a)?)?, None),
        Command::Hilbert { ws, max } => (cmd_hilbert(&workspace(&ws)?, max)?, None),
        Command::Valuate { ws, poly } => (cmd_valuate(&workspace(&ws)?, &poly)?, None),
        Command::Subduct { ws, poly } => (cmd_subduct(&workspace(&ws)?, &poly)?, None),
        Command::Lspaths { ty, lambda, degree, tau } => (cmd_lspaths(&ty, &lambda, degree, tau.as_deref())?, None),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("STRATIFY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok((out, file)) => {
            match file {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &out.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", out.text),
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
