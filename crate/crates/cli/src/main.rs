//! `boxball` command-line tool.
//!
//! Exit codes: 0 on success or a passing check, 1 when a check mode misses
//! its tolerance, 2 on usage or input errors.

mod commands;
mod density;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use boxball::Exec;
use clap::{Parser, Subcommand};

use commands::*;

#[derive(Debug, Parser)]
#[command(name = "boxball", version, about = "Multicolor box-ball system toolkit")]
struct Cli {
    /// Base seed for random streams.
    #[arg(long, global = true, env = "BOXBALL_SEED", default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write an SVG picture (energy, shape).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Omit the '#' provenance header.
    #[arg(long, global = true)]
    no_header: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the time evolution, one line per step.
    Evolve(EvolveArgs),
    /// Energy matrix, Young diagrams and optional vacancies.
    Energy(EnergyArgs),
    /// Limit shape rows, optionally against a sampled configuration.
    Shape(ShapeArgs),
    /// Rate function of a row length or energy.
    Ldp(LdpArgs),
    /// Principal-specialization equilibrium table.
    Tba(TbaArgs),
    /// Number of ballot paths ending at a chamber point.
    Ballot(BallotArgs),
    /// Monte Carlo row-length means against their limits.
    Mc(McArgs),
    /// Survival probabilities of the centered row length.
    Persistence(PersistenceArgs),
    /// Probability of a highest state and sampling.
    Highest(HighestArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Energy(_) => "energy",
            Command::Shape(_) => "shape",
            Command::Ldp(_) => "ldp",
            Command::Tba(_) => "tba",
            Command::Ballot(_) => "ballot",
            Command::Mc(_) => "mc",
            Command::Persistence(_) => "persistence",
            Command::Highest(_) => "highest",
        }
    }
}

fn header(cli: &Cli) -> String {
    let flags: Vec<String> = std::env::args().skip(1).collect();
    format!(
        "# command: {}\n# flags: {}\n# seed: {}\n# version: boxball {}\n",
        cli.command.name(),
        flags.join(" "),
        cli.seed,
        env!("CARGO_PKG_VERSION")
    )
}

fn run(cli: &Cli) -> Result<Report> {
    if let Some(n) = cli.threads {
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting thread pool")?;
        #[cfg(not(feature = "parallel"))]
        let _ = n;
    }
    let exec = Exec::default();
    let svg = cli.svg.is_some();
    match &cli.command {
        Command::Evolve(a) => evolve(a),
        Command::Energy(a) => energy(a, svg),
        Command::Shape(a) => shape(a, cli.seed, svg),
        Command::Ldp(a) => ldp(a, exec),
        Command::Tba(a) => tba(a),
        Command::Ballot(a) => ballot(a),
        Command::Mc(a) => mc(a, cli.seed, exec),
        Command::Persistence(a) => persistence(a, cli.seed, exec),
        Command::Highest(a) => highest(a, cli.seed, exec),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let mut text = if cli.no_header { String::new() } else { header(cli) };
    text.push_str(&report.body);
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &cli.svg {
        let svg = report.svg.as_deref().context("this command has no SVG output")?;
        std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    if !report.log.is_empty() {
        eprint!("{}", report.log);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| emit(&cli, &r).map(|_| r));
    match result {
        Ok(r) if r.passed == Some(false) => {
            eprintln!("boxball {}: tolerance check failed", cli.command.name());
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boxball {}: {e:#}", cli.command.name());
            ExitCode::from(2)
        }
    }
}
