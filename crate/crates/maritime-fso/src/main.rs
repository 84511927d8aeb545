//! Thin command-line front end over [`maritime_fso::scenario`].
//!
//! All computation lives in the library; this binary parses arguments, loads
//! the scenario file, applies overrides, runs one verb, and writes the table.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numeric failure,
//! 3 validation failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maritime_fso::montecarlo::McConfig;
use maritime_fso::report::Format;
use maritime_fso::scenario::{
    run_ansb, run_ase, run_ber, run_outage, run_pdf, run_validate, Scenario,
};
use maritime_fso::Error;

#[derive(Parser)]
#[command(
    name = "maritime-fso",
    about = "Closed-form and Monte-Carlo performance tables for threshold-based \
             multi-beam FSO links under fog and 3D pointing errors",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analytic composite irradiance PDF vs a Monte-Carlo histogram.
    Pdf(RunArgs),
    /// Outage probability sweep over the μ grid.
    Outage(RunArgs),
    /// Average number of selected beams sweep.
    Ansb(RunArgs),
    /// System spectral-efficiency sweep.
    Ase(RunArgs),
    /// Rate-weighted average BER sweep.
    Ber(RunArgs),
    /// Run the invariant and oracle suite; nonzero exit when any check fails.
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the scenario's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario's worker count (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the table here instead of the scenario's output path / stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

fn load(args: &RunArgs) -> Result<Scenario, Error> {
    let mut sc = Scenario::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        sc.mc = McConfig::new(sc.mc.n_samples, seed, sc.mc.workers, sc.mc.sampler)?;
    }
    if let Some(workers) = args.workers {
        let workers = if workers == 0 {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        } else {
            workers
        };
        sc.mc = McConfig::new(sc.mc.n_samples, sc.mc.seed, workers, sc.mc.sampler)?;
    }
    if let Some(out) = &args.out {
        sc.out_path = Some(out.clone());
    }
    if let Some(fmt) = &args.format {
        sc.format = Format::parse(fmt)?;
    }
    Ok(sc)
}

fn run(cmd: &Cmd) -> Result<bool, Error> {
    let args = match cmd {
        Cmd::Pdf(a) | Cmd::Outage(a) | Cmd::Ansb(a) | Cmd::Ase(a) | Cmd::Ber(a)
        | Cmd::Validate(a) => a,
    };
    let sc = load(args)?;
    let (table, ok) = match cmd {
        Cmd::Pdf(_) => (run_pdf(&sc)?, true),
        Cmd::Outage(_) => (run_outage(&sc)?, true),
        Cmd::Ansb(_) => (run_ansb(&sc)?, true),
        Cmd::Ase(_) => (run_ase(&sc)?, true),
        Cmd::Ber(_) => (run_ber(&sc)?, true),
        Cmd::Validate(_) => run_validate(&sc)?,
    };
    table.write(sc.out_path.as_deref(), sc.format)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed; see the report for failing checks");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
