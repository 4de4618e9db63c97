use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracwave::cli;

#[derive(Parser)]
#[command(name = "fracwave", about = "Coupled waves with fractional boundary damping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key = value configuration file (defaults apply when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// RNG seed override
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Time-domain run: energy trace, snapshots, decay fit
    Simulate(Common),
    /// Eigenvalue scan and resolvent sweep of the generator
    Spectrum(Common),
    /// Closed-form vs quadrature validation table
    Quadcheck(Common),
}

type Runner = fn(&cli::RunConfig, &std::path::Path, u64) -> fracwave::Result<()>;

fn main() -> ExitCode {
    let args = Cli::parse();
    let (common, runner): (&Common, Runner) = match &args.command {
            Command::Simulate(c) => (c, cli::cmd_simulate),
            Command::Spectrum(c) => (c, cli::cmd_spectrum),
            Command::Quadcheck(c) => (c, cli::cmd_quadcheck),
        };
    let cfg = match cli::load_config(common.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::exit_code(&e) as u8);
        }
    };
    let seed = common.seed.unwrap_or(cfg.seed);
    match runner(&cfg, &common.out, seed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
