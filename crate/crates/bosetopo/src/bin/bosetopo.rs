use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use bosetopo::cli::{run, write_csv, RunConfig, SweepConfig, Task};
use bosetopo::Error;
use clap::{Parser, Subcommand};

/// Topology and scattering of quadratic bosonic chains.
#[derive(Parser, Debug)]
#[command(name = "bosetopo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination, `-` for stdout (default: bosetopo-<task>.csv).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Relative tolerance of the symmetry tests.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Grid size: k-points, or frequency points for `sparams`.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Close the chain into a ring.
    #[arg(long, global = true)]
    pbc: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of the dynamical matrix with residuals and localization
    Spectrum,
    /// Bands of the Bloch symbol on a uniform k-grid
    Bands,
    /// Many-body symmetry class, searching orbital dressings
    Classify,
    /// Winding or Pfaffian invariant of the Bloch symbol
    Invariant,
    /// Zero modes of the open chain and where they sit
    Zeromodes,
    /// S-parameters over a frequency grid
    Sparams,
    /// Invariant, gap and edge modes along a parameter line
    Sweep {
        /// Model path to vary, e.g. `perturbations[0].strength`.
        #[arg(long)]
        param: Option<String>,
        /// First value of the swept parameter
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        /// Last value of the swept parameter
        #[arg(long, allow_negative_numbers = true)]
        stop: Option<f64>,
        /// Number of points, ends included
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Bulk invariant against the number of left-edge zero modes
    Bulkboundary,
}

fn resolve(cli: Cli) -> Result<RunConfig, Error> {
    let path = cli.config.ok_or_else(|| Error::Parse("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_toml(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let task = match cli.command {
        Command::Spectrum => Task::Spectrum,
        Command::Bands => Task::Bands,
        Command::Classify => Task::Classify,
        Command::Invariant => Task::Invariant,
        Command::Zeromodes => Task::Zeromodes,
        Command::Sparams => Task::Sparams,
        Command::Bulkboundary => Task::Bulkboundary,
        Command::Sweep { param, start, stop, steps } => {
            if param.is_some() || start.is_some() || stop.is_some() || steps.is_some() {
                let base = cfg.sweep.clone();
                let missing = |what: &str| Error::InvalidParameter(format!("sweep needs --{what} or a [sweep] table"));
                cfg.sweep = Some(SweepConfig {
                    parameter: param.or(base.as_ref().map(|s| s.parameter.clone())).ok_or_else(|| missing("param"))?,
                    start: start.or(base.as_ref().map(|s| s.start)).ok_or_else(|| missing("start"))?,
                    stop: stop.or(base.as_ref().map(|s| s.stop)).ok_or_else(|| missing("stop"))?,
                    steps: steps.or(base.as_ref().map(|s| s.steps)).ok_or_else(|| missing("steps"))?,
                });
            }
            Task::Sweep
        }
    };
    cfg.task = Some(task);
    if cli.output.is_some() {
        cfg.output = cli.output;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.classify = t;
    }
    if let Some(g) = cli.grid {
        if task == Task::Sparams {
            cfg.grid.frequencies = g;
        } else {
            cfg.grid.k = g;
        }
    }
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    if cli.pbc {
        cfg.model.pbc = true;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), Error> {
    let cfg = resolve(cli)?;
    let out = run(&cfg)?;
    let path = cfg.output_path();
    // `-` streams the CSV to stdout, so the summary moves to stderr.
    if path.as_os_str() == "-" {
        for line in &out.summary {
            eprintln!("{line}");
        }
        return write_csv(std::io::stdout().lock(), &cfg, &out.table);
    }
    for line in &out.summary {
        println!("{line}");
    }
    let file = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_csv(BufWriter::new(file), &cfg, &out.table)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("bosetopo: {}", e.to_string().lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bosetopo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
