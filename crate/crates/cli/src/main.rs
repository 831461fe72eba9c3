use clap::Parser;
use outflow_cli::{dispatch, exit, exit_code, parse_config, Config, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Stationary outflow profiles and their stability checks.
#[derive(Parser, Debug)]
#[command(name = "outflow", version)]
struct Cli {
    /// steady | evolve-sym | evolve-axi | verify-ops | verify-energy | report
    subcommand: Subcommand,
    /// `key = value` configuration; defaults are used when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// seed of the random point sets in verify-ops
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            return ExitCode::from(code as u8);
        }
    };
    let cfg = match &cli.config {
        Some(p) => match parse_config(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit_code(&e) as u8);
            }
        },
        None => Config::default(),
    };
    if let Some(k) = cli.threads {
        if k == 0 || rayon::ThreadPoolBuilder::new().num_threads(k).build_global().is_err() {
            eprintln!("error: cannot start {k} worker threads");
            return ExitCode::from(exit::USAGE as u8);
        }
    }
    let threads = rayon::current_num_threads();
    ExitCode::from(dispatch(cli.subcommand, &cfg, &cli.out, cli.seed, threads) as u8)
}
