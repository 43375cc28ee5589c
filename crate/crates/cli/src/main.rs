use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fburgers_cli::{cmd_kernel, cmd_rate, cmd_simulate, cmd_verify, CliError, RunConfig};

/// Simulation and verification harness for the fractal Burgers equation
/// `u_t + Lambda^alpha u + u u_x = 0`.
#[derive(Parser, Debug)]
#[command(name = "fburgers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration; missing keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Seed of the randomized corpus, overriding the configuration.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Evolve the configured datum and write trajectory, diagnostics and a plot script.
    Simulate,
    /// Tabulate the stable kernel profile and its tail bounds.
    Kernel,
    /// Run the inequality suite and the solver invariant checks.
    Verify,
    /// Measure the decay rate toward the rarefaction wave over an (alpha, p) grid.
    Rate,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot configure the thread pool: {e}")))?;
    }
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let outcome = match cli.command {
        Command::Simulate => cmd_simulate(&config, &cli.out)?,
        Command::Kernel => cmd_kernel(&config, &cli.out)?,
        Command::Verify => cmd_verify(&config, &cli.out)?,
        Command::Rate => cmd_rate(&config, &cli.out)?,
    };
    for file in outcome.files {
        println!("{}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
